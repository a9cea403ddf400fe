//! Multi-modular resultants for fields ℚ[t]/(m) with m monic and integral.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::arith::{Embed, Field, Fp, PrimeField};
use crate::linalg::Matrix;

use super::resultant::{newton_interpolate, shifted_rows};
use super::{PolyError, Polynomial, UniPoly};

/// x^e mod m over 𝔽_p.
fn powmod(base: &UniPoly<Fp>, mut e: u64, m: &UniPoly<Fp>) -> UniPoly<Fp> {
    let ctx = *m.ctx();
    let mut acc = UniPoly::constant(&ctx, ctx.elem(1));
    let mut b = base.divrem(m).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&b).divrem(m).1;
        }
        b = b.mul(&b).divrem(m).1;
        e >>= 1;
    }
    acc
}

/// All roots of m in 𝔽_p when m splits into distinct linear factors, sorted.
pub(crate) fn split_roots(m: &UniPoly<Fp>) -> Option<Vec<Fp>> {
    let ctx = *m.ctx();
    let p = ctx.modulus() as u64;
    let d = m.degree()?;
    let x = UniPoly::x(&ctx);
    if d == 0 || powmod(&x, p, m) != x.divrem(m).1 || m.gcd(&m.derivative()).degree() != Some(0) {
        return None;
    }
    let mut roots = Vec::with_capacity(d);
    let mut stack = vec![m.monic()];
    while let Some(h) = stack.pop() {
        match h.degree() {
            Some(1) => roots.push(h.coeff(0).neg()),
            Some(k) if k > 1 => {
                let one = UniPoly::constant(&ctx, ctx.elem(1));
                let split = (1..1000).find_map(|delta| {
                    let shifted = x.add(&UniPoly::constant(&ctx, ctx.elem(delta)));
                    let g = h.gcd(&powmod(&shifted, (p - 1) / 2, &h).sub(&one));
                    matches!(g.degree(), Some(j) if j > 0 && j < k).then_some(g)
                })?;
                stack.push(h.divrem(&split).0);
                stack.push(split);
            }
            _ => {}
        }
    }
    roots.sort_by_key(|r| r.residue());
    Some(roots)
}

/// Determinant over 𝔽_p by Gaussian elimination.
fn det_mod(mut m: Vec<Vec<Fp>>, ctx: PrimeField) -> Fp {
    let n = m.len();
    let mut det = ctx.elem(1);
    for k in 0..n {
        let Some(piv) = (k..n).find(|&r| !m[r][k].is_zero()) else { return ctx.elem(0) };
        if piv != k {
            m.swap(piv, k);
            det = det.neg();
        }
        det = det.mul(&m[k][k]);
        let inv = m[k][k].inv().expect("nonzero pivot");
        for r in k + 1..n {
            if m[r][k].is_zero() {
                continue;
            }
            let factor = m[r][k].mul(&inv);
            for c in k..n {
                let v = m[r][c].sub(&factor.mul(&m[k][c]));
                m[r][c] = v;
            }
        }
    }
    det
}

/// Coefficients in `elim` as dense integer coordinates [elim-degree][keep-degree][basis],
/// scaled by a common integer `scale`.
struct IntegralImage {
    coords: Vec<Vec<Vec<BigInt>>>,
    scale: BigInt,
}

impl IntegralImage {
    fn new<F: Field>(p: &Polynomial<F>, elim: usize, keep: usize, d: usize) -> Option<Self> {
        let mut rat: Vec<Vec<Vec<BigRational>>> = Vec::new();
        for c in p.coefficients_in(elim) {
            let uni = c.univariate_coeffs(keep).ok()?;
            rat.push(uni.iter().map(|x| x.power_basis()).collect::<Option<Vec<_>>>()?);
        }
        let scale = rat.iter().flatten().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let coords = rat
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| {
                        let mut v: Vec<BigInt> = v.iter().map(|x| (x * &scale).to_integer()).collect();
                        v.resize(d, BigInt::from(0));
                        v
                    })
                    .collect()
            })
            .collect();
        Some(Self { coords, scale })
    }

    /// log₂ of an upper bound on Σ |σ(entry)| over one Sylvester row, for
    /// any embedding σ with |σ(t)| ≤ 2^log_rho.
    fn log2_row_norm(&self, log_rho: f64) -> f64 {
        let mut max = f64::NEG_INFINITY;
        let mut count = 0usize;
        for v in self.coords.iter().flatten() {
            for (k, x) in v.iter().enumerate() {
                if x.bits() > 0 {
                    max = max.max(x.bits() as f64 + k as f64 * log_rho);
                    count += 1;
                }
            }
        }
        max + (count.max(1) as f64).log2()
    }

    fn reduce(&self, ctx: PrimeField, root: Fp) -> Vec<UniPoly<Fp>> {
        let p = BigInt::from(ctx.modulus());
        self.coords
            .iter()
            .map(|row| {
                let vals = row
                    .iter()
                    .map(|v| {
                        v.iter().rev().fold(ctx.elem(0), |acc, x| {
                            acc.mul(&root).add(&ctx.elem(x.mod_floor(&p).to_i64().expect("residue")))
                        })
                    })
                    .collect();
                UniPoly::new(&ctx, vals)
            })
            .collect()
    }
}

/// Res_elim(f, g) as a polynomial in `keep`, computed modulo word-size primes
/// that split the defining polynomial and lifted by Chinese remaindering up to
/// a Hadamard-type bound. Returns `None` when the field does not qualify.
pub fn resultant_multimodular<F: Field + Embed>(
    f: &Polynomial<F>,
    g: &Polynomial<F>,
    elim: usize,
    keep: usize,
    degree_bound: usize,
) -> Result<Option<UniPoly<F>>, PolyError> {
    let ctx = f.ctx().clone();
    let Some(m) = F::defining_polynomial(&ctx) else { return Ok(None) };
    if m.iter().any(|c| !c.is_integer()) || m.last() != Some(&<BigRational as One>::one()) {
        return Ok(None);
    }
    if f.support_vars().iter().chain(g.support_vars().iter()).any(|&v| v != elim && v != keep) {
        return Err(PolyError::InvalidInput("resultant_multimodular expects bivariate inputs".into()));
    }
    let d = m.len() - 1;
    let (Some(fi), Some(gi)) = (IntegralImage::new(f, elim, keep, d), IntegralImage::new(g, elim, keep, d)) else {
        return Ok(None);
    };
    let deg_f = fi.coords.len() - 1;
    let deg_g = gi.coords.len() - 1;
    if deg_f + deg_g == 0 {
        return Err(PolyError::InvalidInput("resultant of two constants".into()));
    }

    // Embeddings of the generator, for the coordinate bound.
    let gen = F::from_power_basis(&ctx, &(0..d).map(|k| BigRational::from_integer(BigInt::from((k == 1) as i64))).collect::<Vec<_>>())
        .ok_or_else(|| PolyError::InvalidInput("field has no power basis".into()))?;
    let thetas: Vec<Complex64> = if d == 1 {
        vec![Complex64::new(0.0, 0.0)]
    } else {
        (0..d).map(|i| gen.embed(i).map(|z| z.value())).collect::<Result<_, _>>()?
    };
    let log_rho = thetas.iter().map(|t| t.norm()).fold(1.0, f64::max).log2() + 1e-9;
    let vinv = DMatrix::from_fn(d, d, |i, k| thetas[i].powu(k as u32))
        .try_inverse()
        .ok_or_else(|| PolyError::Precondition("defining polynomial is not separable".into()))?;
    let vinv_norm = (0..d).map(|r| (0..d).map(|c| vinv[(r, c)].norm()).sum::<f64>()).fold(0.0, f64::max);
    let log_bound = deg_g as f64 * fi.log2_row_norm(log_rho)
        + deg_f as f64 * gi.log2_row_norm(log_rho)
        + vinv_norm.max(1.0).log2()
        + 4.0;

    let mpoly_int: Vec<i64> = m.iter().map(|c| c.to_integer().to_i64()).collect::<Option<_>>().ok_or_else(|| {
        PolyError::InvalidInput("defining polynomial has large coefficients".into())
    })?;
    let len = degree_bound + 1;
    let mut acc: Vec<Vec<BigInt>> = vec![vec![BigInt::from(0); d]; len];
    let mut modulus = BigInt::one();
    let mut log_modulus = 0.0;
    let mut p = (1u32 << 31) - 1;
    while log_modulus <= log_bound {
        p -= 2;
        let Ok(ctx_p) = PrimeField::new(p) else { continue };
        if (p as usize) <= len {
            return Err(PolyError::Precondition("ran out of word-size primes".into()));
        }
        let Some(roots) = split_roots(&UniPoly::from_i64(&ctx_p, &mpoly_int)) else { continue };
        // images[i][k]: coefficient of keep^k under t ↦ roots[i]
        let images: Vec<UniPoly<Fp>> = roots
            .iter()
            .map(|&r| {
                let fc = fi.reduce(ctx_p, r);
                let gc = gi.reduce(ctx_p, r);
                let xs: Vec<Fp> = (0..len as i64).map(|t| ctx_p.elem(t)).collect();
                let ys: Vec<Fp> = xs
                    .iter()
                    .map(|x| {
                        let fe: Vec<Fp> = fc.iter().map(|c| c.eval(x)).collect();
                        let ge: Vec<Fp> = gc.iter().map(|c| c.eval(x)).collect();
                        det_mod(shifted_rows(&fe, &ge, 0, &ctx_p.elem(0)), ctx_p)
                    })
                    .collect();
                newton_interpolate(&ctx_p, &xs, &ys)
            })
            .collect();
        let vand = Matrix::from_rows(&ctx_p, roots.iter().map(|r| (0..d).map(|k| r.pow(k as u64)).collect()).collect())
            .expect("square");
        let vand_inv = vand.inverse().expect("distinct roots");
        let pb = BigInt::from(p);
        let m_inv_p = (&modulus % &pb).modpow(&BigInt::from(p - 2), &pb);
        for (k, slot) in acc.iter_mut().enumerate() {
            let y: Vec<Fp> = images.iter().map(|u| u.coeff(k)).collect();
            let coords = vand_inv.mul_vec(&y).expect("dimension");
            for (c, x) in slot.iter_mut().zip(coords) {
                let r = BigInt::from(x.residue());
                let delta = ((r - (&*c % &pb)) * &m_inv_p).mod_floor(&pb);
                *c += &modulus * delta;
            }
        }
        modulus *= &pb;
        log_modulus += (p as f64).log2();
    }

    let half = &modulus >> 1;
    let denom = fi.scale.pow(deg_g as u32) * gi.scale.pow(deg_f as u32);
    let coeffs: Vec<F> = acc
        .into_iter()
        .map(|v| {
            let coords: Vec<BigRational> = v
                .into_iter()
                .map(|x| {
                    let s = if x > half { x - &modulus } else { x };
                    BigRational::new(s, denom.clone())
                })
                .collect();
            F::from_power_basis(&ctx, &coords).expect("coordinates of the right length")
        })
        .collect();
    Ok(Some(UniPoly::new(&ctx, coeffs)))
}
