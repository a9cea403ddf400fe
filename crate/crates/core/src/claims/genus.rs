use serde::{Deserialize, Serialize};

use crate::koszul::HilbertSeries;

use super::ClaimError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusBounds {
    pub lower: u32,
    pub upper: u32,
}

impl GenusBounds {
    pub fn exact(&self) -> Option<u32> {
        (self.lower == self.upper).then_some(self.lower)
    }
}

/// Schwarz-genus bounds for PU_n → PU_n/Γ from the cohomology of the quotient.
///
/// With `surjectivity` the top class of the quotient is hit from the
/// classifying space, giving `top + 1` below; the dimension bound is always
/// `manifold_dim + 1` above.
pub fn genus_bounds(poincare: &HilbertSeries, manifold_dim: u32, surjectivity: bool) -> Result<GenusBounds, ClaimError> {
    let upper = manifold_dim + 1;
    if !surjectivity {
        return Ok(GenusBounds { lower: 1, upper });
    }
    match poincare.top_degree() {
        Some(top) if top == manifold_dim => Ok(GenusBounds { lower: top + 1, upper }),
        top => Err(ClaimError::InconsistentEvidence(format!(
            "top nonzero degree {top:?} differs from manifold dimension {manifold_dim}"
        ))),
    }
}

/// Topological-complexity lower bound from a genus lower bound.
pub fn tc_lower(genus_lower: u32) -> u32 {
    genus_lower.saturating_sub(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subgroup_quotients() {
        let mut k = vec![0u64; 16];
        k[0] = 1;
        k[15] = 1;
        let b = genus_bounds(&HilbertSeries::new(k), 15, true).unwrap();
        assert_eq!(b.exact(), Some(16));
        let h = HilbertSeries::new(vec![1, 2, 3, 4, 4, 4, 3, 2, 1]);
        assert_eq!(genus_bounds(&h, 8, true).unwrap(), GenusBounds { lower: 9, upper: 9 });
        assert_eq!(genus_bounds(&h, 8, false).unwrap(), GenusBounds { lower: 1, upper: 9 });
        assert!(matches!(genus_bounds(&h, 9, true), Err(ClaimError::InconsistentEvidence(_))));
    }

    #[test]
    fn tc_from_genus() {
        assert_eq!(tc_lower(16), 15);
        assert_eq!(tc_lower(9), 8);
        assert_eq!(tc_lower(1), 0);
    }
}
