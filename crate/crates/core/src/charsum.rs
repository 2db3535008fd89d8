//! Additive character sums over the inversive vector sets and the explicit
//! square-root bounds they satisfy.
//!
//! The additive character is psi(z) = exp(2*pi*i*Tr(z)/p). For a coordinate
//! subset u and a nonzero coefficient vector w over GF(q)^|u|, the sum of
//! psi(w . z) over the N vectors is bounded by (2|u|-2)sqrt(q) + |u| + 1
//! for the size-q construction and 2|u|sqrt(q) + |u| for the period-T one.
//! [`max_abs_charsum`] checks every nonzero w exhaustively (within a work
//! budget); [`sampled_max_charsum`] spot-checks random w on larger fields.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::splitmix64_next;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec, TraceTable};
use crate::pointset::{check_subset, Construction, InversiveVectors};

/// The additive character psi(z) = exp(2*pi*i*Tr(z)/p).
pub fn psi(field: &FieldSpec, z: &FieldElement) -> Result<Complex64> {
    field.check_element(z)?;
    let t = field.trace_raw(z);
    Ok(unit_root(field.p, t))
}

fn unit_root(p: u64, t: u64) -> Complex64 {
    let angle = 2.0 * std::f64::consts::PI * (t as f64) / (p as f64);
    Complex64::new(angle.cos(), angle.sin())
}

/// Character-sum bound for the size-q construction: (2|u|-2)sqrt(q)+|u|+1.
pub fn bound_size_q(q: u64, u_size: usize) -> f64 {
    let d = u_size as f64;
    (2.0 * d - 2.0) * (q as f64).sqrt() + d + 1.0
}

/// Character-sum bound for the period-T construction: 2|u|sqrt(q)+|u|.
pub fn bound_period_t(q: u64, u_size: usize) -> f64 {
    let d = u_size as f64;
    2.0 * d * (q as f64).sqrt() + d
}

/// Bound matching the construction that produced `vectors`.
pub fn bound_for(construction: Construction, q: u64, u_size: usize) -> f64 {
    match construction {
        Construction::SizeQ => bound_size_q(q, u_size),
        Construction::PeriodT => bound_period_t(q, u_size),
    }
}

/// The sum of psi(w_1 z_{n,1} + ... + w_s z_{n,s}) over all N vectors.
/// `w` must have one coefficient per coordinate of `vectors`.
pub fn charsum(vectors: &InversiveVectors, w: &[FieldElement]) -> Result<Complex64> {
    let field = &vectors.field;
    if w.len() != vectors.s {
        return Err(Error::invalid(format!(
            "w has {} coefficients, expected s = {}",
            w.len(),
            vectors.s
        )));
    }
    for wi in w {
        field.check_element(wi)?;
    }
    let table = TraceTable::new(field);
    let roots: Vec<Complex64> = (0..field.p).map(|t| unit_root(field.p, t)).collect();
    let (mut re, mut im) = (0.0f64, 0.0f64);
    let (mut cre, mut cim) = (0.0f64, 0.0f64);
    for n in 0..vectors.n {
        let mut t = 0u64;
        for (i, wi) in w.iter().enumerate() {
            let z = vectors.element(n, i);
            t += table.trace_coeffs(field.mul_raw(wi, &z).coeffs());
        }
        let root = roots[(t % field.p) as usize];
        // Kahan-compensated accumulation keeps long sums exact enough to
        // compare against bounds at 1e-9 tolerance.
        let y = root.re - cre;
        let s = re + y;
        cre = (s - re) - y;
        re = s;
        let y = root.im - cim;
        let s = im + y;
        cim = (s - im) - y;
        im = s;
    }
    Ok(Complex64::new(re, im))
}

/// Outcome of a character-sum bound check on one coordinate subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharSumReport {
    pub q: u64,
    /// Coordinate subset (1-based, strictly increasing).
    pub u: Vec<usize>,
    #[serde(rename = "N")]
    pub n: usize,
    pub construction: Construction,
    /// Largest |sum| seen over the scanned coefficient vectors.
    pub max_abs: f64,
    /// Canonical element indices of the w attaining `max_abs`, one per
    /// coordinate in `u`.
    pub argmax_w: Vec<u64>,
    pub bound: f64,
    pub holds: bool,
    /// True when every nonzero w was scanned, false for a random sample.
    pub exhaustive: bool,
}

/// Discrete-log multiplication tables over GF(q)*: products become index
/// lookups, which keeps the exhaustive scan cheap.
struct MulTables {
    q: u64,
    exp: Vec<u64>,
    dlog: Vec<u64>,
}

impl MulTables {
    fn new(field: &FieldSpec) -> Result<MulTables> {
        let q = field.q();
        let g = field.element_of_order(q - 1)?;
        let mut exp = Vec::with_capacity((q - 1) as usize);
        let mut dlog = vec![0u64; q as usize];
        let mut power = field.one();
        for j in 0..q - 1 {
            let idx = field.index_raw(&power);
            exp.push(idx);
            dlog[idx as usize] = j;
            power = field.mul_raw(&power, &g);
        }
        Ok(MulTables { q, exp, dlog })
    }

    #[inline]
    fn mul_idx(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let j = self.dlog[a as usize] + self.dlog[b as usize];
        self.exp[(j % (self.q - 1)) as usize]
    }
}

/// Shared state for scanning many w against one projected vector set.
struct Scan {
    q: u64,
    p: u64,
    n: usize,
    d: usize,
    tables: MulTables,
    /// Trace of each field element by canonical index.
    tr: Vec<u64>,
    /// Element indices of the projected vectors, row-major N x |u|.
    zu: Vec<u64>,
    roots: Vec<Complex64>,
}

impl Scan {
    fn new(vectors: &InversiveVectors, u: &[usize]) -> Result<Scan> {
        check_subset(u, vectors.s)?;
        let field = &vectors.field;
        let q = field.q();
        let table = TraceTable::new(field);
        let tr: Vec<u64> = (0..q).map(|i| table.trace_index(i)).collect();
        let mut zu = Vec::with_capacity(vectors.n * u.len());
        for n in 0..vectors.n {
            for &i in u {
                zu.push(vectors.index(n, i - 1));
            }
        }
        Ok(Scan {
            q,
            p: field.p,
            n: vectors.n,
            d: u.len(),
            tables: MulTables::new(field)?,
            tr,
            zu,
            roots: (0..field.p).map(|t| unit_root(field.p, t)).collect(),
        })
    }

    /// Decodes a w rank (1 <= rank < q^d, coordinate 0 least significant)
    /// into element indices.
    fn decode(&self, rank: u64) -> Vec<u64> {
        let mut w = Vec::with_capacity(self.d);
        let mut r = rank;
        for _ in 0..self.d {
            w.push(r % self.q);
            r /= self.q;
        }
        w
    }

    fn abs_at(&self, rank: u64) -> f64 {
        let w = self.decode(rank);
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for n in 0..self.n {
            let mut t = 0u64;
            for (i, &wi) in w.iter().enumerate() {
                let zi = self.zu[n * self.d + i];
                t += self.tr[self.tables.mul_idx(wi, zi) as usize];
            }
            let root = self.roots[(t % self.p) as usize];
            re += root.re;
            im += root.im;
        }
        (re * re + im * im).sqrt()
    }
}

/// Larger |sum| wins; exact float ties break toward the smaller rank so the
/// result does not depend on scan order or thread count.
fn better(a: (f64, u64), b: (f64, u64)) -> (f64, u64) {
    if a.0 > b.0 || (a.0 == b.0 && a.1 <= b.1) {
        a
    } else {
        b
    }
}

const BOUND_TOL: f64 = 1e-9;

fn report(vectors: &InversiveVectors, u: &[usize], best: (f64, u64), scan: &Scan, exhaustive: bool) -> CharSumReport {
    let bound = bound_for(vectors.construction, scan.q, u.len());
    CharSumReport {
        q: scan.q,
        u: u.to_vec(),
        n: vectors.n,
        construction: vectors.construction,
        max_abs: best.0,
        argmax_w: scan.decode(best.1),
        bound,
        holds: best.0 <= bound + BOUND_TOL,
        exhaustive,
    }
}

/// Exhaustive maximum of |character sum| over all nonzero w for the
/// projection of `vectors` onto the subset `u`. The q^|u| candidate
/// vectors must fit in `budget`.
pub fn max_abs_charsum(
    vectors: &InversiveVectors,
    u: &[usize],
    budget: u64,
) -> Result<CharSumReport> {
    let scan = Scan::new(vectors, u)?;
    let total = (0..u.len()).try_fold(1u128, |acc, _| {
        acc.checked_mul(scan.q as u128).ok_or(Error::OracleTooLarge {
            candidates: u128::MAX,
            budget,
        })
    })?;
    if total > budget as u128 {
        return Err(Error::OracleTooLarge {
            candidates: total,
            budget,
        });
    }
    let candidates = total - 1;
    let last = (candidates + 1) as u64;
    let best = if candidates < (1 << 12) {
        (1..last)
            .map(|rank| (scan.abs_at(rank), rank))
            .fold((-1.0, 0), better)
    } else {
        (1..last)
            .into_par_iter()
            .map(|rank| (scan.abs_at(rank), rank))
            .reduce(|| (-1.0, 0), better)
    };
    Ok(report(vectors, u, best, &scan, true))
}

/// Maximum of |character sum| over `samples` pseudorandom nonzero w,
/// deterministic in `seed`. A cheap spot check when the exhaustive scan
/// would blow the budget.
pub fn sampled_max_charsum(
    vectors: &InversiveVectors,
    u: &[usize],
    samples: u64,
    seed: u64,
) -> Result<CharSumReport> {
    if samples == 0 {
        return Err(Error::invalid("sample count must be positive"));
    }
    let scan = Scan::new(vectors, u)?;
    let total = (0..u.len()).fold(1u128, |acc, _| acc.saturating_mul(scan.q as u128));
    let mut state = seed;
    let mut best = (-1.0, 0u64);
    for _ in 0..samples {
        let rank = loop {
            let r = splitmix64_next(&mut state) as u128 % total;
            if r != 0 {
                break r as u64;
            }
        };
        best = better(best, (scan.abs_at(rank), rank));
    }
    Ok(report(vectors, u, best, &scan, false))
}
