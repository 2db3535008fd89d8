//! Exact star discrepancy, weighted star discrepancy, and the closed-form
//! bounds the inversive constructions satisfy.
//!
//! The exact oracle enumerates every anchored-box corner built from the
//! distinct coordinate values (plus 1) and evaluates both the open-box value
//! and the closed-box supremum in exact rational arithmetic. On top of it
//! sit the Erdős–Turán–Koksma style bound [`etk_bound`], the construction
//! bound [`weighted_discrepancy_bound`], the decay-rate surrogate
//! [`decay_rate_check`], and the tractability inverse [`min_q_for_eps`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{next_prime_power_at_least, prime_power_decompose};
use crate::error::{Error, Result};
use crate::pointset::{Construction, RationalPointSet};

/// Whether a discrepancy value is attained by an open anchored box or is
/// the supremum over boxes closing on the witness corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Attainment {
    Closed,
    Open,
}

/// Exact star discrepancy of a point set, with the witness corner.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyResult {
    /// The discrepancy as an exact rational in [0, 1].
    pub value: BigRational,
    pub value_f64: f64,
    /// Corner of the anchored box realizing the value.
    pub witness: Vec<BigRational>,
    /// Number of points counted at the witness: the closed count for
    /// `Closed` attainment, the strict count for `Open`.
    pub witness_count: u64,
    pub attainment: Attainment,
}

/// One row of a measured-versus-bound comparison, the common currency of
/// verification reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub q: u64,
    pub p: u64,
    pub k: usize,
    pub s: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub construction: Construction,
    pub u: Vec<usize>,
    pub measured: f64,
    pub bound_kind: String,
    pub bound: f64,
    pub holds: bool,
}

/// Exact star discrepancy by corner enumeration.
///
/// For each corner α in the product of per-coordinate candidate sets
/// ({distinct values} ∪ {1}), both branches are evaluated exactly:
/// closed |{x : x ≤ α}|/N − vol(α) (the supremum of boxes shrinking onto
/// [0,α]) and open vol(α) − |{x : x < α}|/N (attained by [0,α) itself).
/// The corner grid size must fit in `budget`.
pub fn star_discrepancy_exact(ps: &RationalPointSet, budget: u64) -> Result<DiscrepancyResult> {
    let (n, s, den) = (ps.n, ps.s, ps.den);
    if n == 0 || s == 0 {
        return Err(Error::invalid("point set must be nonempty"));
    }
    // Per-coordinate corner candidates: distinct values plus the full edge.
    let mut cands: Vec<Vec<u64>> = Vec::with_capacity(s);
    for i in 0..s {
        let mut v: Vec<u64> = (0..n).map(|row| ps.numerator(row, i)).collect();
        v.push(den);
        v.sort_unstable();
        v.dedup();
        cands.push(v);
    }
    let corners = cands
        .iter()
        .try_fold(1u128, |acc, c| acc.checked_mul(c.len() as u128))
        .filter(|&c| c <= budget as u128)
        .ok_or(Error::OracleTooLarge {
            candidates: cands.iter().fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128)),
            budget,
        })?;
    let _ = corners;

    // Fast path: all candidate values share denominator den, so every
    // branch value has denominator N * den^s and only the integer
    // numerators need comparing. Falls back to big-integer arithmetic
    // when den^s leaves the 128-bit comfortable range.
    let den_s = (0..s).try_fold(1u128, |acc, _| acc.checked_mul(den as u128));
    let fits = den_s
        .map(|d| d < (i128::MAX as u128) / (2 * n as u128))
        .unwrap_or(false);
    let best = if fits {
        scan_corners_i128(ps, &cands, den_s.unwrap() as i128)
    } else {
        scan_corners_big(ps, &cands)
    };

    let den_s_big = BigInt::from(den).pow(s as u32);
    let value = BigRational::new(best.num.clone(), BigInt::from(n as u64) * &den_s_big);
    debug_assert!(!value.is_negative() && value <= BigRational::one());
    let witness: Vec<BigRational> = best
        .corner
        .iter()
        .map(|&a| BigRational::new(BigInt::from(a), BigInt::from(den)))
        .collect();
    Ok(DiscrepancyResult {
        value_f64: value.to_f64().unwrap_or(f64::NAN),
        value,
        witness,
        witness_count: best.count,
        attainment: best.attainment,
    })
}

struct BestCorner {
    /// Numerator of the best value over the common denominator N * den^s.
    num: BigInt,
    corner: Vec<u64>,
    count: u64,
    attainment: Attainment,
}

/// Counts points inside the closed box [0, corner] and the open box
/// [0, corner) in one pass.
fn count_box(ps: &RationalPointSet, corner: &[u64]) -> (u64, u64) {
    let mut a_le = 0u64;
    let mut a_lt = 0u64;
    for row in 0..ps.n {
        let mut le = true;
        let mut lt = true;
        for (i, &a) in corner.iter().enumerate() {
            let m = ps.numerator(row, i);
            if m > a {
                le = false;
                lt = false;
                break;
            }
            if m == a {
                lt = false;
            }
        }
        a_le += le as u64;
        a_lt += lt as u64;
    }
    (a_le, a_lt)
}

fn scan_corners_i128(ps: &RationalPointSet, cands: &[Vec<u64>], den_s: i128) -> BestCorner {
    let (n, s) = (ps.n as i128, ps.s);
    let mut idx = vec![0usize; s];
    let mut corner = vec![0u64; s];
    let mut best_num = i128::MIN;
    let mut best = BestCorner {
        num: BigInt::zero(),
        corner: corner.clone(),
        count: 0,
        attainment: Attainment::Closed,
    };
    loop {
        for (i, &j) in idx.iter().enumerate() {
            corner[i] = cands[i][j];
        }
        let vol_num: i128 = corner.iter().fold(n, |acc, &a| acc * a as i128);
        let (a_le, a_lt) = count_box(ps, &corner);
        let closed = a_le as i128 * den_s - vol_num;
        let open = vol_num - a_lt as i128 * den_s;
        if closed > best_num {
            best_num = closed;
            best.corner.copy_from_slice(&corner);
            best.count = a_le;
            best.attainment = Attainment::Closed;
        }
        if open > best_num {
            best_num = open;
            best.corner.copy_from_slice(&corner);
            best.count = a_lt;
            best.attainment = Attainment::Open;
        }
        if !advance(&mut idx, cands) {
            break;
        }
    }
    best.num = BigInt::from(best_num);
    best
}

fn scan_corners_big(ps: &RationalPointSet, cands: &[Vec<u64>]) -> BestCorner {
    let s = ps.s;
    let n = BigInt::from(ps.n as u64);
    let den_s = BigInt::from(ps.den).pow(s as u32);
    let mut idx = vec![0usize; s];
    let mut corner = vec![0u64; s];
    let mut best: Option<BestCorner> = None;
    loop {
        for (i, &j) in idx.iter().enumerate() {
            corner[i] = cands[i][j];
        }
        let vol_num: BigInt = corner
            .iter()
            .fold(n.clone(), |acc, &a| acc * BigInt::from(a));
        let (a_le, a_lt) = count_box(ps, &corner);
        let closed = BigInt::from(a_le) * &den_s - &vol_num;
        let open = &vol_num - BigInt::from(a_lt) * &den_s;
        let improve_closed = best.as_ref().map_or(true, |b| closed > b.num);
        if improve_closed {
            best = Some(BestCorner {
                num: closed.clone(),
                corner: corner.clone(),
                count: a_le,
                attainment: Attainment::Closed,
            });
        }
        if best.as_ref().map_or(true, |b| open > b.num) {
            best = Some(BestCorner {
                num: open,
                corner: corner.clone(),
                count: a_lt,
                attainment: Attainment::Open,
            });
        }
        if !advance(&mut idx, cands) {
            break;
        }
    }
    best.expect("at least one corner")
}

/// Mixed-radix odometer step (last coordinate fastest); false when done.
fn advance(idx: &mut [usize], cands: &[Vec<u64>]) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < cands[i].len() {
            return true;
        }
        idx[i] = 0;
    }
    false
}

/// Coordinate weights for the weighted star discrepancy: either a product
/// rule generating γ_j per coordinate, or explicit per-subset weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WeightSpec {
    /// γ_j = c for every coordinate.
    Const { c: f64 },
    /// γ_j = c / j^a.
    Power { c: f64, a: f64 },
    /// Explicit γ_u per nonempty subset; unlisted subsets weigh 0.
    Explicit { entries: Vec<SubsetWeight> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetWeight {
    pub u: Vec<usize>,
    pub gamma: f64,
}

impl WeightSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            WeightSpec::Const { c } => check_weight(*c),
            WeightSpec::Power { c, a } => {
                check_weight(*c)?;
                if !a.is_finite() {
                    return Err(Error::invalid("weight exponent must be finite"));
                }
                Ok(())
            }
            WeightSpec::Explicit { entries } => {
                for e in entries {
                    check_weight(e.gamma)?;
                    if e.u.is_empty() || e.u.windows(2).any(|w| w[0] >= w[1]) || e.u[0] < 1 {
                        return Err(Error::invalid(
                            "explicit weight subsets must be nonempty and strictly increasing",
                        ));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn is_product(&self) -> bool {
        !matches!(self, WeightSpec::Explicit { .. })
    }

    /// Per-coordinate weight γ_j (1-based); `None` for explicit weights.
    pub fn gamma_j(&self, j: usize) -> Option<f64> {
        match self {
            WeightSpec::Const { c } => Some(*c),
            WeightSpec::Power { c, a } => Some(c / (j as f64).powf(*a)),
            WeightSpec::Explicit { .. } => None,
        }
    }

    /// Weight of a nonempty coordinate subset (1-based, increasing).
    pub fn gamma_u(&self, u: &[usize]) -> Result<f64> {
        if u.is_empty() {
            return Err(Error::invalid("subset must be nonempty"));
        }
        match self {
            WeightSpec::Explicit { entries } => Ok(entries
                .iter()
                .find(|e| e.u == u)
                .map(|e| e.gamma)
                .unwrap_or(0.0)),
            _ => Ok(u.iter().map(|&j| self.gamma_j(j).unwrap()).product()),
        }
    }
}

fn check_weight(c: f64) -> Result<()> {
    if !(c.is_finite() && c >= 0.0) {
        return Err(Error::invalid("weights must be finite and nonnegative"));
    }
    Ok(())
}

/// Weighted star discrepancy computed as max over subsets u of
/// γ_u · D*(projection onto u).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDiscrepancy {
    pub value: f64,
    /// Subset attaining the maximum.
    pub argmax_u: Vec<usize>,
    /// False when `max_order` truncated the subset enumeration, making
    /// the value a lower bound.
    pub complete: bool,
}

/// Exact weighted star discrepancy over all nonempty coordinate subsets of
/// order at most `max_order`. The anchored-box structure makes the weighted
/// discrepancy equal to the max of γ_u times the projected discrepancies.
pub fn weighted_star_discrepancy_exact(
    ps: &RationalPointSet,
    weights: &WeightSpec,
    max_order: usize,
    budget: u64,
) -> Result<WeightedDiscrepancy> {
    weights.validate()?;
    let s = ps.s;
    if s == 0 || s > 20 {
        return Err(Error::invalid("dimension must be in 1..=20 for subset enumeration"));
    }
    if max_order == 0 || max_order > s {
        return Err(Error::invalid("max_order must be in 1..=s"));
    }
    let mut best = (-1.0f64, Vec::new());
    for mask in 1u32..(1u32 << s) {
        if (mask.count_ones() as usize) > max_order {
            continue;
        }
        let u: Vec<usize> = (0..s).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
        let gamma = weights.gamma_u(&u)?;
        let value = if gamma == 0.0 {
            0.0
        } else {
            gamma * star_discrepancy_exact(&ps.project(&u)?, budget)?.value_f64
        };
        if value > best.0 {
            best = (value, u);
        }
    }
    Ok(WeightedDiscrepancy {
        value: best.0,
        argmax_u: best.1,
        complete: max_order == s,
    })
}

/// The auxiliary factor of the Erdős–Turán–Koksma style bound:
/// (k/2 + 1)^s for p = 2 and (((2/π) ln p + 7/5) k)^s for odd p.
pub fn etk_factor(q: u64, s: usize) -> Result<f64> {
    let (p, k) = decompose(q)?;
    Ok(etk_base(p, k).powi(s as i32))
}

fn decompose(q: u64) -> Result<(u64, usize)> {
    prime_power_decompose(q)
        .map(|(p, k)| (p, k as usize))
        .ok_or_else(|| Error::invalid(format!("q = {q} is not a prime power")))
}

fn etk_base(p: u64, k: usize) -> f64 {
    if p == 2 {
        k as f64 / 2.0 + 1.0
    } else {
        ((2.0 / std::f64::consts::PI) * (p as f64).ln() + 1.4) * k as f64
    }
}

/// Erdős–Turán–Koksma style discrepancy bound
/// s/q + etk_factor(q, s) · max_charsum / N.
pub fn etk_bound(s: usize, q: u64, n: usize, max_charsum: f64) -> Result<f64> {
    if s == 0 || n == 0 {
        return Err(Error::invalid("s and N must be positive"));
    }
    if !(max_charsum >= 0.0) {
        return Err(Error::invalid("max_charsum must be nonnegative"));
    }
    Ok(s as f64 / q as f64 + etk_factor(q, s)? * max_charsum / n as f64)
}

fn logaddexp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Log of the subset term for |u| = r, shared by both constructions:
/// ln(r) + ln(1/q + 3 · base^r · scale), with scale = q^{-1/2} for the
/// size-q construction and q^{1/2}/T for the period-T one.
fn ln_subset_term(r: usize, ln_base: f64, ln_q: f64, chi: f64) -> f64 {
    let r_f = r as f64;
    r_f.ln() + logaddexp(-ln_q, 3f64.ln() + r_f * ln_base + chi)
}

/// Max over r of (prefix product of the r largest weights) times the
/// subset term, computed in log space to dodge overflow/underflow.
fn max_ln_product_term(
    ln_gammas_desc: impl Iterator<Item = f64>,
    ln_base: f64,
    ln_q: f64,
    chi: f64,
) -> f64 {
    let mut prefix = 0.0f64;
    let mut best = f64::NEG_INFINITY;
    for (r, ln_g) in ln_gammas_desc.enumerate() {
        prefix += ln_g;
        if prefix == f64::NEG_INFINITY {
            break;
        }
        best = best.max(prefix + ln_subset_term(r + 1, ln_base, ln_q, chi));
    }
    best
}

fn chi_for(construction: Construction, ln_q: f64, period: Option<u64>) -> Result<f64> {
    match construction {
        Construction::SizeQ => {
            if period.is_some() {
                return Err(Error::invalid("period only applies to the period-T construction"));
            }
            Ok(-0.5 * ln_q)
        }
        Construction::PeriodT => {
            let t = period.ok_or_else(|| Error::invalid("period-T bound requires T"))?;
            if t == 0 {
                return Err(Error::invalid("period T must be positive"));
            }
            Ok(0.5 * ln_q - (t as f64).ln())
        }
    }
}

/// Closed-form upper bound on the weighted star discrepancy of the
/// inversive constructions:
/// max over nonempty u ⊆ [s] of γ_u |u| (1/q + 3·etk_factor(q,|u|)/√q)
/// for the size-q set, with √q/T replacing 1/√q for the period-T set.
///
/// Product weights reduce the subset max to s candidates (one per order,
/// using the r largest weights); explicit weights enumerate their subsets.
pub fn weighted_discrepancy_bound(
    construction: Construction,
    weights: &WeightSpec,
    s: usize,
    q: u64,
    period: Option<u64>,
) -> Result<f64> {
    weights.validate()?;
    if s == 0 {
        return Err(Error::invalid("dimension s must be positive"));
    }
    let (p, k) = decompose(q)?;
    let ln_q = (q as f64).ln();
    let ln_base = etk_base(p, k).ln();
    let chi = chi_for(construction, ln_q, period)?;
    match weights {
        WeightSpec::Explicit { entries } => {
            if s > 20 {
                return Err(Error::invalid("explicit weights support s <= 20"));
            }
            let mut best = 0.0f64;
            for e in entries {
                if *e.u.last().unwrap() > s {
                    return Err(Error::invalid("explicit weight subset exceeds dimension s"));
                }
                if e.gamma == 0.0 {
                    continue;
                }
                let term =
                    e.gamma * (ln_subset_term(e.u.len(), ln_base, ln_q, chi)).exp();
                best = best.max(term);
            }
            Ok(best)
        }
        _ => {
            let mut gammas: Vec<f64> = (1..=s).map(|j| weights.gamma_j(j).unwrap()).collect();
            gammas.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let best = max_ln_product_term(
                gammas.into_iter().map(f64::ln),
                ln_base,
                ln_q,
                chi,
            );
            Ok(best.exp())
        }
    }
}

/// One evaluation point of the decay-rate surrogate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub q: u64,
    pub s: usize,
    pub bound: f64,
    /// bound · q^(1/2 - delta); bounded across q when the rate holds.
    pub scaled: f64,
}

/// One ratio comparison between two evaluation points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioCheck {
    pub q_lo: u64,
    pub q_hi: u64,
    pub ratio: f64,
    pub threshold: f64,
    pub holds: bool,
}

/// Outcome of [`decay_rate_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateCheck {
    pub delta: f64,
    pub slack: f64,
    pub points: Vec<RatePoint>,
    pub ratios: Vec<RatioCheck>,
    pub passes: bool,
}

/// Empirical check that the size-q weighted discrepancy bound decays like
/// q^-(1/2-delta) for summably decaying product weights.
///
/// Evaluates [`weighted_discrepancy_bound`] at each q with dimension
/// s = q, then compares bounds two list positions apart (≈ 4x in q for a
/// doubling list): each ratio must not exceed (q_hi/q_lo)^-(1/2-delta)
/// plus `slack`. Requires non-increasing product weights and
/// 0 ≤ delta < 1/2.
pub fn decay_rate_check(
    weights: &WeightSpec,
    delta: f64,
    q_list: &[u64],
    slack: f64,
) -> Result<RateCheck> {
    weights.validate()?;
    if !(0.0..0.5).contains(&delta) {
        return Err(Error::invalid("delta must lie in [0, 1/2)"));
    }
    if !(slack.is_finite() && slack >= 0.0) {
        return Err(Error::invalid("slack must be finite and nonnegative"));
    }
    match weights {
        WeightSpec::Explicit { .. } => {
            return Err(Error::invalid("rate check requires product weights"));
        }
        WeightSpec::Power { a, .. } if *a < 0.0 => {
            return Err(Error::invalid("rate check requires non-increasing weights"));
        }
        _ => {}
    }
    let exponent = 0.5 - delta;
    let mut ln_bounds = Vec::with_capacity(q_list.len());
    let mut points = Vec::with_capacity(q_list.len());
    for &q in q_list {
        let (p, k) = decompose(q)?;
        let s = q as usize;
        let ln_q = (q as f64).ln();
        let ln_base = etk_base(p, k).ln();
        let chi = -0.5 * ln_q;
        let ln_bound = max_ln_product_term(
            (1..=s).map(|j| weights.gamma_j(j).unwrap().ln()),
            ln_base,
            ln_q,
            chi,
        );
        ln_bounds.push(ln_bound);
        points.push(RatePoint {
            q,
            s,
            bound: ln_bound.exp(),
            scaled: (ln_bound + exponent * ln_q).exp(),
        });
    }
    let mut ratios = Vec::new();
    for i in 0..points.len().saturating_sub(2) {
        let (lo, hi) = (&points[i], &points[i + 2]);
        let ratio = if ln_bounds[i] == f64::NEG_INFINITY && ln_bounds[i + 2] == f64::NEG_INFINITY {
            0.0
        } else {
            (ln_bounds[i + 2] - ln_bounds[i]).exp()
        };
        let threshold = (hi.q as f64 / lo.q as f64).powf(-exponent) + slack;
        ratios.push(RatioCheck {
            q_lo: lo.q,
            q_hi: hi.q,
            ratio,
            threshold,
            holds: ratio <= threshold,
        });
    }
    let passes = ratios.iter().all(|r| r.holds);
    Ok(RateCheck {
        delta,
        slack,
        points,
        ratios,
        passes,
    })
}

/// Result of the tractability inverse: the target size M and the smallest
/// prime power q ≥ M.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InverseEps {
    pub eps: f64,
    pub delta: f64,
    pub c: f64,
    /// M = ⌈(c/eps)^(2/(1-2 delta))⌉, raised to 2 when smaller (the
    /// smallest prime power is 2, and the Bertrand range needs M ≥ 2).
    pub m: u64,
    pub q: u64,
}

/// Smallest prime power q with discrepancy bound c / q^(1/2-delta) ≤ eps:
/// q is the smallest prime power ≥ M = ⌈(c/eps)^(2/(1-2 delta))⌉, and by
/// Bertrand's postulate q < 2M.
pub fn min_q_for_eps(eps: f64, delta: f64, c: f64) -> Result<InverseEps> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid("eps must lie in (0, 1)"));
    }
    if !(0.0..0.5).contains(&delta) {
        return Err(Error::invalid("delta must lie in [0, 1/2)"));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::invalid("c must be positive and finite"));
    }
    let x = (c / eps).powf(2.0 / (1.0 - 2.0 * delta));
    if !x.is_finite() || x > (1u64 << 50) as f64 {
        return Err(Error::invalid("target size exceeds the search range"));
    }
    // The relative nudge keeps a mathematically integral target (for
    // example (1/0.1)^2 = 100, computed as 100.0000000000000x) from being
    // ceiled one too high.
    let m = ((x * (1.0 - 1e-12)).ceil() as u64).max(2);
    let q = next_prime_power_at_least(m);
    assert!(q < 2 * m, "prime-power gap exceeded the Bertrand range");
    Ok(InverseEps {
        eps,
        delta,
        c,
        m,
        q,
    })
}
