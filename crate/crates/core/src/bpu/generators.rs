use serde::{Deserialize, Serialize};

use crate::arith::Field;
use crate::poly::Polynomial;

use super::{BpuError, NablaContext};

/// Integer polynomial in c_1..c_n, given by (exponents, coefficient) pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorEntry {
    pub name: String,
    pub degree: u32,
    pub terms: Vec<(Vec<u32>, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorList {
    pub n: usize,
    pub entries: Vec<GeneratorEntry>,
}

impl GeneratorList {
    pub fn instantiate<F: Field>(&self, nctx: &NablaContext<F>) -> Vec<Polynomial<F>> {
        self.entries
            .iter()
            .map(|e| {
                let terms: Vec<(&[u32], i64)> = e.terms.iter().map(|(m, c)| (m.as_slice(), *c)).collect();
                nctx.from_int_terms(&terms)
            })
            .collect()
    }

    /// Generators that are not products of earlier ones, in degree order.
    pub fn algebra_generators(&self) -> Vec<&GeneratorEntry> {
        self.entries.iter().filter(|e| !e.name.contains('^')).collect()
    }
}

fn entry(name: &str, degree: u32, terms: &[(&[u32], i64)]) -> GeneratorEntry {
    GeneratorEntry { name: name.into(), degree, terms: terms.iter().map(|(m, c)| (m.to_vec(), *c)).collect() }
}

/// Integral generators of Ker ∇ for n = 3 and n = 4.
pub fn standard_generators(n: usize) -> Result<GeneratorList, BpuError> {
    let entries = match n {
        3 => vec![
            entry("eps4", 4, &[(&[2, 0, 0], 1), (&[0, 1, 0], -3)]),
            entry("eps6", 6, &[(&[3, 0, 0], 2), (&[1, 1, 0], -9), (&[0, 0, 1], 27)]),
        ],
        4 => vec![
            entry("eps4", 4, &[(&[2, 0, 0, 0], 3), (&[0, 1, 0, 0], -8)]),
            entry("eps6", 6, &[(&[3, 0, 0, 0], 1), (&[1, 1, 0, 0], -4), (&[0, 0, 1, 0], 8)]),
            entry("eps4^2", 8, &[(&[4, 0, 0, 0], 9), (&[2, 1, 0, 0], -48), (&[0, 2, 0, 0], 64)]),
            entry(
                "eps8",
                8,
                &[(&[4, 0, 0, 0], 3), (&[2, 1, 0, 0], -16), (&[1, 0, 1, 0], 64), (&[0, 0, 0, 1], -256)],
            ),
        ],
        _ => return Err(BpuError::InvalidInput(format!("no generator list for n = {n}"))),
    };
    Ok(GeneratorList { n, entries })
}
