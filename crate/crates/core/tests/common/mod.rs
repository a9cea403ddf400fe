#![allow(dead_code)]

use std::sync::Arc;

use enumtc_core::arith::Field;
use enumtc_core::poly::{Polynomial, VariableTable};
use proptest::prelude::*;

pub type Terms = Vec<(Vec<u32>, i64)>;

/// Sparse integer polynomials with at most `max_terms` terms of total degree ≤ `max_deg`.
pub fn terms(nvars: usize, max_deg: u32, max_terms: usize, coeff: i64) -> impl Strategy<Value = Terms> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, nvars), -coeff..=coeff), 0..=max_terms).prop_map(
        move |ts| ts.into_iter().filter(|(e, _)| e.iter().sum::<u32>() <= max_deg).collect(),
    )
}

/// Homogeneous integer forms of total degree `d` (uniform weights).
pub fn form(nvars: usize, d: u32, max_terms: usize, coeff: i64) -> impl Strategy<Value = Terms> {
    prop::collection::vec((prop::collection::vec(0..=d, nvars - 1), -coeff..=coeff), 1..=max_terms).prop_map(
        move |ts| {
            ts.into_iter()
                .filter_map(|(mut e, c)| {
                    let s: u32 = e.iter().sum();
                    (s <= d).then(|| {
                        e.push(d - s);
                        (e, c)
                    })
                })
                .collect()
        },
    )
}

pub fn build<F: Field>(table: &Arc<VariableTable>, ctx: &F::Ctx, ts: &Terms) -> Polynomial<F> {
    Polynomial::from_terms(table, ctx, ts.iter().map(|(e, c)| (e.clone(), F::from_i64(ctx, *c))))
}
