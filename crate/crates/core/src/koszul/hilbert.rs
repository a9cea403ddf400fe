use serde::{Deserialize, Serialize};

/// Finite coefficient vector h_0..h_D of a graded dimension count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSeries {
    coeffs: Vec<u64>,
}

impl HilbertSeries {
    pub fn new(coeffs: Vec<u64>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, t: u32) -> u64 {
        self.coeffs.get(t as usize).copied().unwrap_or(0)
    }

    /// Highest degree with a nonzero coefficient.
    pub fn top_degree(&self) -> Option<u32> {
        self.coeffs.iter().rposition(|&c| c != 0).map(|i| i as u32)
    }

    /// Coefficients up to the top degree.
    pub fn trimmed(&self) -> &[u64] {
        &self.coeffs[..self.top_degree().map_or(0, |d| d as usize + 1)]
    }

    pub fn total(&self) -> u64 {
        self.coeffs.iter().sum()
    }

    pub fn alternating_sum(&self) -> i64 {
        self.coeffs.iter().enumerate().map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }

    pub fn is_palindromic(&self) -> bool {
        let t = self.trimmed();
        t.iter().eq(t.iter().rev())
    }

    /// Product with (1 + t)^m.
    pub fn times_exterior(&self, m: u32) -> Self {
        let mut c = self.coeffs.clone();
        for _ in 0..m {
            c.push(0);
            for i in (1..c.len()).rev() {
                c[i] += c[i - 1];
            }
        }
        Self { coeffs: c }
    }

    pub fn truncated(&self, up_to: u32) -> Self {
        let mut c = self.coeffs.clone();
        c.truncate(up_to as usize + 1);
        Self { coeffs: c }
    }

    /// Power-series expansion of ∏(1 − t^d_i) / ∏(1 − t^w_j) up to `up_to`.
    pub fn complete_intersection(degrees: &[u32], weights: &[u32], up_to: u32) -> Vec<i64> {
        let n = up_to as usize + 1;
        let mut c = vec![0i64; n];
        c[0] = 1;
        for &d in degrees {
            for i in (d as usize..n).rev() {
                c[i] -= c[i - d as usize];
            }
        }
        for &w in weights {
            for i in w as usize..n {
                c[i] += c[i - w as usize];
            }
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_expansions() {
        assert_eq!(HilbertSeries::complete_intersection(&[4, 6], &[1, 1], 9), vec![1, 2, 3, 4, 4, 4, 3, 2, 1, 0]);
        let c = HilbertSeries::complete_intersection(&[4, 6, 8], &[2, 2, 2], 14);
        assert_eq!(c.iter().sum::<i64>(), 24);
        assert_eq!(c[12], 1);
        assert_eq!(c[14], 0);
    }

    #[test]
    fn exterior_factor() {
        let h = HilbertSeries::new(vec![1, 0, 1]).times_exterior(1);
        assert_eq!(h.coeffs(), &[1, 1, 1, 1]);
        assert!(h.is_palindromic());
        assert_eq!(h.alternating_sum(), 0);
    }
}
