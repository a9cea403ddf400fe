use nalgebra::Matrix3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A point or line of ℙ² with certification data.
#[derive(Debug, Clone, PartialEq)]
pub struct Projective {
    /// Normalized: the first coordinate of (near) maximal modulus equals 1.
    pub coords: [Complex64; 3],
    pub residual: f64,
    pub multiplicity: usize,
}

/// Scales so that the first coordinate of maximal modulus becomes 1.
pub fn normalize(v: [Complex64; 3]) -> [Complex64; 3] {
    let max = v.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return v;
    }
    let k = v.iter().position(|c| c.norm() >= max * (1.0 - 1e-9)).expect("maximum exists");
    let s = v[k];
    let mut out = v.map(|c| c / s);
    out[k] = Complex64::new(1.0, 0.0);
    out
}

/// Fubini–Study distance sqrt(1 − |⟨p,q⟩|²/(|p|²|q|²)).
pub fn fubini_study(p: &[Complex64; 3], q: &[Complex64; 3]) -> f64 {
    let ip: Complex64 = p.iter().zip(q).map(|(a, b)| a.conj() * b).sum();
    let np: f64 = p.iter().map(|c| c.norm_sqr()).sum();
    let nq: f64 = q.iter().map(|c| c.norm_sqr()).sum();
    (1.0 - ip.norm_sqr() / (np * nq)).max(0.0).sqrt()
}

impl Projective {
    pub fn new(coords: [Complex64; 3], residual: f64, multiplicity: usize) -> Self {
        Self { coords: normalize(coords), residual, multiplicity }
    }

    pub fn distance(&self, other: &Projective) -> f64 {
        fubini_study(&self.coords, &other.coords)
    }

    /// Image of a point under P ↦ g·P.
    pub fn map_point(&self, g: &Matrix3<Complex64>) -> Self {
        let v = g * nalgebra::Vector3::from(self.coords);
        Self::new([v[0], v[1], v[2]], self.residual, self.multiplicity)
    }

    /// Image of a line u under u ↦ u·g⁻¹.
    pub fn map_line(&self, g_inv: &Matrix3<Complex64>) -> Self {
        let v = nalgebra::RowVector3::from_row_slice(&self.coords) * g_inv;
        Self::new([v[0], v[1], v[2]], self.residual, self.multiplicity)
    }

    fn sort_key(&self) -> [f64; 6] {
        let c = &self.coords;
        [c[0].re, c[0].im, c[1].re, c[1].im, c[2].re, c[2].im]
    }
}

/// Merges objects closer than `radius`, summing multiplicities and keeping
/// the smaller residual; output is sorted by normalized coordinates.
pub fn dedup(items: Vec<Projective>, radius: f64) -> Vec<Projective> {
    let mut out: Vec<Projective> = Vec::new();
    for it in items {
        match out.iter_mut().find(|o| o.distance(&it) < radius) {
            Some(o) => {
                o.multiplicity += it.multiplicity;
                if it.residual < o.residual {
                    o.coords = it.coords;
                    o.residual = it.residual;
                }
            }
            None => out.push(it),
        }
    }
    sort_projective(&mut out);
    out
}

pub(crate) fn sort_projective(v: &mut [Projective]) {
    let q = |x: f64| (x * 1e8).round();
    v.sort_by(|a, b| {
        let ka = a.sort_key().map(q);
        let kb = b.sort_key().map(q);
        ka.partial_cmp(&kb).expect("finite coordinates")
    });
}

fn complex_string(c: Complex64) -> String {
    format!("{:.15e}{:+.15e}i", c.re, c.im)
}

/// Solutions of an enumerative problem in ℙ².
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSet {
    pub kind: String,
    pub dedup_radius: f64,
    pub items: Vec<Projective>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionJson {
    pub coords: [String; 3],
    pub residual: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionSetJson {
    pub kind: String,
    pub dedup_radius: f64,
    pub objects: Vec<SolutionJson>,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.items.iter().map(|p| p.multiplicity).sum()
    }

    pub fn max_residual(&self) -> f64 {
        self.items.iter().map(|p| p.residual).fold(0.0, f64::max)
    }

    pub fn min_separation(&self) -> f64 {
        let mut m = f64::INFINITY;
        for (i, a) in self.items.iter().enumerate() {
            for b in &self.items[i + 1..] {
                m = m.min(a.distance(b));
            }
        }
        m
    }

    pub fn to_json(&self) -> SolutionSetJson {
        SolutionSetJson {
            kind: self.kind.clone(),
            dedup_radius: self.dedup_radius,
            objects: self
                .items
                .iter()
                .map(|p| SolutionJson {
                    coords: p.coords.map(complex_string),
                    residual: p.residual,
                    multiplicity: p.multiplicity,
                })
                .collect(),
        }
    }
}
