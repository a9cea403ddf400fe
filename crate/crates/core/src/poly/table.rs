use std::cmp::Ordering;
use std::sync::Arc;

use super::PolyError;

/// Ordered, weighted variable names of a polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableTable {
    names: Vec<String>,
    weights: Vec<u32>,
}

impl VariableTable {
    pub fn new<S: AsRef<str>>(names: &[S], weights: &[u32]) -> Result<Arc<Self>, PolyError> {
        if names.len() != weights.len() {
            return Err(PolyError::InvalidInput("names and weights differ in length".into()));
        }
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || names[..i].contains(n) {
                return Err(PolyError::InvalidInput(format!("duplicate or empty variable name `{n}`")));
            }
        }
        if weights.contains(&0) {
            return Err(PolyError::InvalidInput("variable weights must be >= 1".into()));
        }
        Ok(Arc::new(Self { names, weights: weights.to_vec() }))
    }

    /// All weights equal to one.
    pub fn uniform<S: AsRef<str>>(names: &[S]) -> Arc<Self> {
        Self::new(names, &vec![1; names.len()]).expect("distinct names")
    }

    /// Variables `prefix1, …, prefixN` with weight `weight_step · i`.
    pub fn indexed(prefix: &str, n: usize, weight_step: u32) -> Arc<Self> {
        let names: Vec<String> = (1..=n).map(|i| format!("{prefix}{i}")).collect();
        let weights: Vec<u32> = (1..=n as u32).map(|i| weight_step * i).collect();
        Self::new(&names, &weights).expect("distinct names")
    }

    /// Variables `prefix1, …, prefixN` all of the same weight.
    pub fn indexed_flat(prefix: &str, n: usize, weight: u32) -> Arc<Self> {
        let names: Vec<String> = (1..=n).map(|i| format!("{prefix}{i}")).collect();
        Self::new(&names, &vec![weight; n]).expect("distinct names")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn weighted_degree(&self, m: &Monomial) -> u32 {
        m.0.iter().zip(&self.weights).map(|(e, w)| e * w).sum()
    }

    /// Weighted graded reverse-lexicographic comparison.
    pub fn grevlex(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.weighted_degree(a).cmp(&self.weighted_degree(b)).then_with(|| {
            for (x, y) in a.0.iter().zip(&b.0).rev() {
                if x != y {
                    return y.cmp(x);
                }
            }
            Ordering::Equal
        })
    }

    /// All monomials of the given weighted degree, in descending grevlex order.
    pub fn monomials_of_degree(&self, degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.len()];
        fn rec(t: &VariableTable, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i == t.len() {
                if left == 0 {
                    out.push(Monomial(cur.clone()));
                }
                return;
            }
            let w = t.weights[i];
            for e in 0..=left / w {
                cur[i] = e;
                rec(t, i + 1, left - e * w, cur, out);
            }
            cur[i] = 0;
        }
        rec(self, 0, degree, &mut cur, &mut out);
        out.sort_by(|a, b| self.grevlex(b, a));
        out
    }
}

/// Exponent vector aligned with a [`VariableTable`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Self {
        let mut v = vec![0; nvars];
        v[i] = e;
        Monomial(v)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_tables() {
        assert!(VariableTable::new(&["x", "x"], &[1, 1]).is_err());
        assert!(VariableTable::new(&["x"], &[0]).is_err());
        assert!(VariableTable::new(&["x", "y"], &[1]).is_err());
    }

    #[test]
    fn grevlex_order() {
        let t = VariableTable::uniform(&["x", "y", "z"]);
        let m = |v: [u32; 3]| Monomial(v.to_vec());
        assert_eq!(t.grevlex(&m([1, 0, 1]), &m([0, 2, 0])), Ordering::Less);
        assert_eq!(t.grevlex(&m([2, 0, 0]), &m([0, 1, 1])), Ordering::Greater);
        assert_eq!(t.grevlex(&m([0, 0, 3]), &m([1, 0, 0])), Ordering::Greater);
    }

    #[test]
    fn weighted_monomial_counts() {
        let c = VariableTable::indexed("c", 4, 2);
        assert_eq!(c.monomials_of_degree(8).len(), 5);
        assert_eq!(c.monomials_of_degree(7).len(), 0);
        let top = &c.monomials_of_degree(8)[0];
        assert_eq!(top.0, vec![4, 0, 0, 0]);
    }
}
