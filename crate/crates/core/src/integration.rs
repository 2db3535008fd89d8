//! Quasi-Monte Carlo integration with the inversive point sets: product
//! cosine test integrands, the tent (baker's) transform for the cosine
//! class, norm upper bounds for both function classes, and convergence
//! sweeps against the worst-case error bound.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::field::make_field;
use crate::pointset::{generate_size_q, RationalPointSet, SizeQConfig};

/// Slack added to measured-versus-bound comparisons to absorb float dust.
const HOLD_TOL: f64 = 1e-12;

/// Errors below this are treated as zero when fitting convergence slopes:
/// they are accumulated float noise, not signal.
const ERROR_FLOOR: f64 = 1e-14;

/// Smoothness parameters of the integrand class: Hölder exponent
/// `alpha` in (0, 1] and the norm exponent `t` in [1, ∞] (infinity
/// serializes as the string "inf").
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassParams {
    pub alpha: f64,
    #[serde(with = "t_serde")]
    pub t: f64,
}

impl ClassParams {
    pub fn new(alpha: f64, t: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::invalid("alpha must lie in (0, 1]"));
        }
        if !(t >= 1.0) {
            return Err(Error::invalid("t must lie in [1, inf]"));
        }
        Ok(ClassParams { alpha, t })
    }

    /// Conjugate exponent t' with 1/t + 1/t' = 1.
    pub fn conjugate_t(&self) -> f64 {
        conjugate(self.t)
    }
}

/// Serializes t = ∞ as the string "inf" (JSON has no infinity literal).
mod t_serde {
    use serde::{de, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(t: &f64, ser: S) -> std::result::Result<S::Ok, S::Error> {
        if t.is_infinite() {
            ser.serialize_str("inf")
        } else {
            ser.serialize_f64(*t)
        }
    }

    struct TVisitor;

    impl<'de> de::Visitor<'de> for TVisitor {
        type Value = f64;

        fn expecting(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
            write!(f, "a number or the string \"inf\"")
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<f64, E> {
            Ok(v)
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<f64, E> {
            match v {
                "inf" | "infinity" => Ok(f64::INFINITY),
                _ => v.parse().map_err(E::custom),
            }
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<f64, D::Error> {
        de.deserialize_any(TVisitor)
    }
}

fn conjugate(t: f64) -> f64 {
    if t == 1.0 {
        f64::INFINITY
    } else if t.is_infinite() {
        1.0
    } else {
        t / (t - 1.0)
    }
}

fn lp_norm(v: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        v.iter().fold(0.0f64, |m, &x| m.max(x))
    } else if p == 1.0 {
        v.iter().sum()
    } else {
        v.iter().map(|&x| x.powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// Which cosine system a [`CosProdIntegrand`] is built from: full-period
/// cosines cos(2πx) (the Fourier-series class) or half-period cosines
/// √2·cos(πx) (the cosine-series class, integrated via the tent
/// transform).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Fourier,
    Cosine,
}

/// Product test integrand with exact integral 1:
/// Π_j (1 + a_j cos(2π x_j)) for `Fourier` parity,
/// Π_j (1 + a_j √2 cos(π x_j)) for `Cosine` parity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CosProdIntegrand {
    pub amplitudes: Vec<f64>,
    pub parity: Parity,
}

impl CosProdIntegrand {
    pub fn new(amplitudes: Vec<f64>, parity: Parity) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::invalid("integrand needs at least one coordinate"));
        }
        if amplitudes.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
            return Err(Error::invalid("amplitudes must be finite and nonnegative"));
        }
        Ok(CosProdIntegrand { amplitudes, parity })
    }

    pub fn s(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.s());
        match self.parity {
            Parity::Fourier => self
                .amplitudes
                .iter()
                .zip(x)
                .map(|(&a, &xi)| 1.0 + a * (2.0 * PI * xi).cos())
                .product(),
            Parity::Cosine => self
                .amplitudes
                .iter()
                .zip(x)
                .map(|(&a, &xi)| 1.0 + a * SQRT_2 * (PI * xi).cos())
                .product(),
        }
    }

    /// Every cosine factor integrates to 1 over [0, 1].
    pub fn exact_integral(&self) -> f64 {
        1.0
    }

    /// Norm upper bound in the class matching the parity.
    pub fn norm_upper(&self, params: &ClassParams) -> f64 {
        match self.parity {
            Parity::Fourier => fourier_class_norm_upper(&self.amplitudes, params),
            Parity::Cosine => cosine_class_norm_upper(&self.amplitudes, params),
        }
    }
}

/// Amplitudes a_j = c / j^a for j = 1..=s.
pub fn power_amplitudes(s: usize, c: f64, a: f64) -> Vec<f64> {
    (1..=s).map(|j| c / (j as f64).powf(a)).collect()
}

/// Trigonometric polynomial Σ c_h e^(2πi h·x) given as (h, c_h) pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteFourierIntegrand {
    pub terms: Vec<(Vec<i64>, Complex64)>,
}

impl FiniteFourierIntegrand {
    pub fn new(terms: Vec<(Vec<i64>, Complex64)>) -> Result<Self> {
        let s = terms
            .first()
            .map(|(h, _)| h.len())
            .ok_or_else(|| Error::invalid("integrand needs at least one term"))?;
        if s == 0 || terms.iter().any(|(h, _)| h.len() != s) {
            return Err(Error::invalid("frequency vectors must share a positive length"));
        }
        Ok(FiniteFourierIntegrand { terms })
    }

    pub fn s(&self) -> usize {
        self.terms[0].0.len()
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        debug_assert_eq!(x.len(), self.s());
        self.terms
            .iter()
            .map(|(h, c)| {
                let phase: f64 = h.iter().zip(x).map(|(&hj, &xj)| hj as f64 * xj).sum();
                c * Complex64::from_polar(1.0, 2.0 * PI * phase)
            })
            .sum()
    }

    /// Sum of the coefficients at frequency zero.
    pub fn exact_integral(&self) -> Complex64 {
        self.terms
            .iter()
            .filter(|(h, _)| h.iter().all(|&hj| hj == 0))
            .map(|(_, c)| c)
            .sum()
    }
}

fn kahan_add(sum: &mut f64, comp: &mut f64, x: f64) {
    let y = x - *comp;
    let t = *sum + y;
    *comp = (t - *sum) - y;
    *sum = t;
}

/// Equal-weight quadrature (1/N) Σ_n f(x_n) with compensated summation.
pub fn qmc_apply<F: FnMut(&[f64]) -> f64>(ps: &RationalPointSet, mut f: F) -> f64 {
    assert!(ps.n > 0, "empty point set");
    let mut row = vec![0.0f64; ps.s];
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for n in 0..ps.n {
        ps.fill_row_f64(n, &mut row);
        kahan_add(&mut sum, &mut comp, f(&row));
    }
    sum / ps.n as f64
}

/// Complex-valued variant of [`qmc_apply`].
pub fn qmc_apply_complex<F: FnMut(&[f64]) -> Complex64>(
    ps: &RationalPointSet,
    mut f: F,
) -> Complex64 {
    assert!(ps.n > 0, "empty point set");
    let mut row = vec![0.0f64; ps.s];
    let (mut re, mut re_c) = (0.0f64, 0.0f64);
    let (mut im, mut im_c) = (0.0f64, 0.0f64);
    for n in 0..ps.n {
        ps.fill_row_f64(n, &mut row);
        let v = f(&row);
        kahan_add(&mut re, &mut re_c, v.re);
        kahan_add(&mut im, &mut im_c, v.im);
    }
    Complex64::new(re, im) / ps.n as f64
}

/// Tent (baker's) transform on exact rationals: m/den ↦ (den − |2m − den|)/den,
/// the numerator form of x ↦ 1 − |2x − 1|.
pub fn tent_numerator(num: u64, den: u64) -> u64 {
    debug_assert!(num <= den);
    (den as u128 - (2 * num as u128).abs_diff(den as u128)) as u64
}

/// Applies the tent transform to every coordinate.
pub fn tent_pointset(ps: &RationalPointSet) -> RationalPointSet {
    let numerators = ps
        .numerators
        .iter()
        .map(|&m| tent_numerator(m, ps.den))
        .collect();
    RationalPointSet::new(ps.den, ps.n, ps.s, numerators)
        .expect("tent keeps coordinates inside [0, 1]")
}

/// Worst-case error factor of the equal-weight rule on the smoothness
/// class: max(3/√N, s^(α/t)/N^α). The quadrature error is bounded by this
/// factor times the class norm of the integrand.
pub fn error_bound(n: usize, s: usize, params: &ClassParams) -> Result<f64> {
    ClassParams::new(params.alpha, params.t)?;
    if n == 0 || s == 0 {
        return Err(Error::invalid("N and s must be positive"));
    }
    let n_f = n as f64;
    let root = 3.0 / n_f.sqrt();
    let exponent = if params.t.is_infinite() {
        0.0
    } else {
        params.alpha / params.t
    };
    let hoelder = (s as f64).powf(exponent) / n_f.powf(params.alpha);
    Ok(root.max(hoelder))
}

/// Shared core of both norm bounds: per-coordinate terms
/// v_j = A_j Π_{i≠j} (1 + A_i), their sum (the series part
/// Σ_{∅≠u} |u| Π_{j∈u} A_j), the ℓ_{t'} norm, and sup = Π (1 + A_j).
fn norm_terms(amps: &[f64], t: f64) -> (f64, f64, f64) {
    let v: Vec<f64> = (0..amps.len())
        .map(|j| {
            amps[j]
                * amps
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != j)
                    .map(|(_, &a)| 1.0 + a)
                    .product::<f64>()
        })
        .collect();
    let series: f64 = v.iter().sum();
    let dual = lp_norm(&v, conjugate(t));
    let sup: f64 = amps.iter().map(|&a| 1.0 + a).product();
    (series, dual, sup)
}

/// Hölder term L^α · min(2 sup, L s^(1/t))^(1−α), exact at α = 1.
fn hoelder_term(l: f64, sup: f64, s: usize, params: &ClassParams) -> f64 {
    if params.alpha == 1.0 {
        return l;
    }
    if l == 0.0 {
        return 0.0;
    }
    let diameter = (s as f64).powf(1.0 / params.t);
    l.powf(params.alpha) * (2.0 * sup).min(l * diameter).powf(1.0 - params.alpha)
}

/// Upper bound on the Fourier-class norm of the `Fourier`-parity product
/// integrand with the given amplitudes: the coefficient series part
/// Σ_{∅≠u} |u| Π_{j∈u} a_j plus the Hölder part built from the Lipschitz
/// vector (2π a_j Π_{i≠j} (1 + a_i)).
pub fn fourier_class_norm_upper(amplitudes: &[f64], params: &ClassParams) -> f64 {
    let (series, dual, sup) = norm_terms(amplitudes, params.t);
    let l = 2.0 * PI * dual;
    series + hoelder_term(l, sup, amplitudes.len(), params)
}

/// Upper bound on the cosine-class norm of the `Cosine`-parity product
/// integrand: the same shape as [`fourier_class_norm_upper`] with
/// effective amplitudes √2 a_j, Lipschitz vector (√2 π a_j Π (1 + √2 a_i)),
/// and the Hölder part scaled by 2^α (the cost of the tent transfer).
pub fn cosine_class_norm_upper(amplitudes: &[f64], params: &ClassParams) -> f64 {
    let eff: Vec<f64> = amplitudes.iter().map(|&a| SQRT_2 * a).collect();
    let (series, dual, sup) = norm_terms(&eff, params.t);
    let l = PI * dual;
    series + 2f64.powf(params.alpha) * hoelder_term(l, sup, amplitudes.len(), params)
}

/// One integration run: estimate, error, and the worst-case bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegrationReport {
    pub q: u64,
    #[serde(rename = "N")]
    pub n: usize,
    pub s: usize,
    pub parity: Parity,
    pub alpha: f64,
    #[serde(with = "t_serde")]
    pub t: f64,
    pub estimate: f64,
    pub error: f64,
    pub norm_upper: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Integrates a product cosine integrand with the size-q point set over
/// GF(q). `Cosine` parity evaluates on the tent-transformed points, the
/// quadrature the cosine-class bound is stated for.
pub fn integrate_on_size_q(
    q: u64,
    integrand: &CosProdIntegrand,
    params: &ClassParams,
) -> Result<IntegrationReport> {
    let (p, k) = crate::arith::prime_power_decompose(q)
        .ok_or_else(|| Error::invalid(format!("q = {q} is not a prime power")))?;
    let field = make_field(p, k as usize)?;
    let s = integrand.s();
    let cfg = SizeQConfig::with_dimension(field, s)?;
    let points = generate_size_q(&cfg)?.to_rational();
    let nodes = match integrand.parity {
        Parity::Fourier => points,
        Parity::Cosine => tent_pointset(&points),
    };
    let estimate = qmc_apply(&nodes, |x| integrand.eval(x));
    let error = (estimate - integrand.exact_integral()).abs();
    let norm_upper = integrand.norm_upper(params);
    let bound = error_bound(nodes.n, s, params)? * norm_upper;
    Ok(IntegrationReport {
        q,
        n: nodes.n,
        s,
        parity: integrand.parity,
        alpha: params.alpha,
        t: params.t,
        estimate,
        error,
        norm_upper,
        bound,
        holds: error <= bound + HOLD_TOL,
    })
}

/// Convergence sweep over a list of prime powers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceSweep {
    pub records: Vec<IntegrationReport>,
    /// Least-squares slope of ln(error) against ln(N), ignoring errors at
    /// the float-noise floor; `None` when fewer than two points remain.
    pub slope: Option<f64>,
    pub all_hold: bool,
}

/// Runs [`integrate_on_size_q`] for each q and fits the empirical
/// convergence rate.
pub fn convergence_sweep(
    q_list: &[u64],
    integrand: &CosProdIntegrand,
    params: &ClassParams,
) -> Result<ConvergenceSweep> {
    if q_list.is_empty() {
        return Err(Error::invalid("sweep needs at least one q"));
    }
    let records: Vec<IntegrationReport> = q_list
        .iter()
        .map(|&q| integrate_on_size_q(q, integrand, params))
        .collect::<Result<_>>()?;
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.error > ERROR_FLOOR)
        .map(|r| ((r.n as f64).ln(), r.error.ln()))
        .collect();
    let all_hold = records.iter().all(|r| r.holds);
    Ok(ConvergenceSweep {
        records,
        slope: fit_slope(&pts),
        all_hold,
    })
}

fn fit_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::splitmix64_next;
    use crate::charsum::charsum;
    use crate::pointset::InversiveVectors;

    fn size_q_points(p: u64, k: usize, s: usize) -> RationalPointSet {
        let field = make_field(p, k).unwrap();
        generate_size_q(&SizeQConfig::with_dimension(field, s).unwrap())
            .unwrap()
            .to_rational()
    }

    fn u01(state: &mut u64) -> f64 {
        (splitmix64_next(state) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    #[test]
    fn class_params_validation() {
        assert!(ClassParams::new(1.0, f64::INFINITY).is_ok());
        assert!(ClassParams::new(0.5, 1.0).is_ok());
        assert!(ClassParams::new(0.0, 2.0).is_err());
        assert!(ClassParams::new(1.1, 2.0).is_err());
        assert!(ClassParams::new(0.5, 0.9).is_err());
        assert!(ClassParams::new(f64::NAN, 2.0).is_err());
        assert!(ClassParams::new(0.5, f64::NAN).is_err());
        assert_eq!(ClassParams::new(1.0, 1.0).unwrap().conjugate_t(), f64::INFINITY);
        assert_eq!(ClassParams::new(1.0, f64::INFINITY).unwrap().conjugate_t(), 1.0);
        assert_eq!(ClassParams::new(1.0, 2.0).unwrap().conjugate_t(), 2.0);
    }

    #[test]
    fn class_params_serde_handles_infinity() {
        let p = ClassParams::new(0.7, f64::INFINITY).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        assert!(json.contains("\"t\":\"inf\""));
        let back: ClassParams = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        let p = ClassParams::new(0.7, 2.5).unwrap();
        let back: ClassParams = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
        let from_int: ClassParams = serde_json::from_str("{\"alpha\":1.0,\"t\":2}").unwrap();
        assert_eq!(from_int.t, 2.0);
    }

    #[test]
    fn qmc_mean_of_constant_is_exactly_one() {
        let ps = size_q_points(7, 1, 2);
        let f = CosProdIntegrand::new(vec![0.0, 0.0], Parity::Fourier).unwrap();
        assert_eq!(qmc_apply(&ps, |x| f.eval(x)), 1.0);
    }

    #[test]
    fn qmc_exponential_sum_vanishes_on_full_grid() {
        let ps = size_q_points(5, 1, 1);
        let f = FiniteFourierIntegrand::new(vec![(vec![1], Complex64::new(1.0, 0.0))]).unwrap();
        let q = qmc_apply_complex(&ps, |x| f.eval(x));
        assert!(q.norm() < 1e-12);
    }

    #[test]
    fn gf5_two_dimensional_cos_product_pin() {
        let ps = size_q_points(5, 1, 2);
        let f = CosProdIntegrand::new(vec![1.0, 1.0], Parity::Fourier).unwrap();
        let q = qmc_apply(&ps, |x| f.eval(x));
        assert!((q - 1.154508497187474).abs() < 1e-12, "{q}");
    }

    #[test]
    fn tent_numerator_pins() {
        assert_eq!(tent_numerator(5, 10), 10); // 0.5 -> 1.0
        assert_eq!(tent_numerator(0, 10), 0);
        assert_eq!(tent_numerator(10, 10), 0);
        assert_eq!(tent_numerator(3, 10), 6); // 0.3 -> 0.6
        let grid: Vec<u64> = (0..5).map(|m| tent_numerator(2 * m, 10)).collect();
        assert_eq!(grid, vec![0, 4, 8, 8, 4]);
    }

    #[test]
    fn tent_of_full_grid_is_trapezoidal_doubling() {
        // The image of {m/den : 0 <= m < den} is every even numerator
        // twice, except 0 and den once each: discrete measure
        // preservation, and exactly the composite trapezoid rule.
        let den = 1024u64;
        let mut image: Vec<u64> = (0..den).map(|m| tent_numerator(m, den)).collect();
        image.sort_unstable();
        let mut expect = vec![0];
        for j in 1..den / 2 {
            expect.push(2 * j);
            expect.push(2 * j);
        }
        expect.push(den);
        expect.sort_unstable();
        assert_eq!(image, expect);

        let mean: f64 = (0..den)
            .map(|m| {
                let y = tent_numerator(m, den) as f64 / den as f64;
                y * y
            })
            .sum::<f64>()
            / den as f64;
        assert!((mean - 1.0 / 3.0).abs() < 1e-5);
    }

    #[test]
    fn tent_transfer_matches_fourier_parity() {
        // cos(π tent(x)) = cos(2π x), so the cosine-parity integrand on
        // tent points equals the Fourier-parity integrand with √2-scaled
        // amplitudes on the original points.
        let mut state = 7u64;
        for _ in 0..100 {
            let s = 1 + (splitmix64_next(&mut state) % 3) as usize;
            let amps: Vec<f64> = (0..s).map(|_| 2.0 * u01(&mut state)).collect();
            let g = CosProdIntegrand::new(amps.clone(), Parity::Cosine).unwrap();
            let f = CosProdIntegrand::new(
                amps.iter().map(|a| SQRT_2 * a).collect(),
                Parity::Fourier,
            )
            .unwrap();
            let den = 10_000u64;
            let x: Vec<f64> = (0..s)
                .map(|_| (splitmix64_next(&mut state) % (den + 1)) as f64 / den as f64)
                .collect();
            let tx: Vec<f64> = x
                .iter()
                .map(|&xi| tent_numerator((xi * den as f64).round() as u64, den) as f64 / den as f64)
                .collect();
            assert!((g.eval(&tx) - f.eval(&x)).abs() < 1e-12);
        }

        let ps = size_q_points(13, 1, 2);
        let g = CosProdIntegrand::new(vec![0.9, 0.4], Parity::Cosine).unwrap();
        let f = CosProdIntegrand::new(vec![0.9 * SQRT_2, 0.4 * SQRT_2], Parity::Fourier).unwrap();
        let via_tent = qmc_apply(&tent_pointset(&ps), |x| g.eval(x));
        let direct = qmc_apply(&ps, |x| f.eval(x));
        assert!((via_tent - direct).abs() < 1e-12);
    }

    #[test]
    fn finite_fourier_matches_character_sum_on_prime_field() {
        // Over GF(p) the coordinates are z/p, so N·Q(e^{2πi h·x}) is the
        // character sum at w = h mod p.
        let field = make_field(7, 1).unwrap();
        let cfg = SizeQConfig::with_dimension(field.clone(), 2).unwrap();
        let vectors = InversiveVectors::size_q(&cfg).unwrap();
        let ps = generate_size_q(&cfg).unwrap().to_rational();
        for h in [[1i64, 0], [2, 3], [6, 6], [0, 5]] {
            let f = FiniteFourierIntegrand::new(vec![(
                h.to_vec(),
                Complex64::new(1.0, 0.0),
            )])
            .unwrap();
            let q_sum = qmc_apply_complex(&ps, |x| f.eval(x)) * ps.n as f64;
            let w: Vec<_> = h
                .iter()
                .map(|&hj| field.from_index(hj as u64).unwrap())
                .collect();
            let direct = charsum(&vectors, &w).unwrap();
            assert!((q_sum - direct).norm() < 1e-9, "h={h:?}");
        }
    }

    #[test]
    fn error_bound_pins_and_monotonicity() {
        let p1 = ClassParams::new(1.0, f64::INFINITY).unwrap();
        assert!((error_bound(100, 5, &p1).unwrap() - 0.3).abs() < 1e-15);
        let p2 = ClassParams::new(1.0, 1.0).unwrap();
        assert!((error_bound(4, 9, &p2).unwrap() - 2.25).abs() < 1e-15);
        let mut prev = f64::INFINITY;
        for e in 4..16 {
            let b = error_bound(1 << e, 3, &ClassParams::new(0.6, 2.0).unwrap()).unwrap();
            assert!(b < prev);
            prev = b;
        }
        assert!(error_bound(0, 1, &p1).is_err());
    }

    #[test]
    fn norm_upper_pins() {
        let p = ClassParams::new(1.0, f64::INFINITY).unwrap();
        assert_eq!(fourier_class_norm_upper(&[0.0, 0.0], &p), 0.0);
        assert_eq!(cosine_class_norm_upper(&[0.0], &p), 0.0);

        let n1 = fourier_class_norm_upper(&[1.0], &p);
        assert!((n1 - (1.0 + 2.0 * PI)).abs() < 1e-12);

        let n2 = fourier_class_norm_upper(&[1.0, 1.0], &p);
        assert!((n2 - (4.0 + 8.0 * PI)).abs() < 1e-12);
        assert!((n2 - 8.0 * PI - 4.0).abs() < 1e-12); // series part alone

        let c1 = cosine_class_norm_upper(&[1.0], &p);
        assert!((c1 - (SQRT_2 + 2.0 * SQRT_2 * PI)).abs() < 1e-12);
    }

    #[test]
    fn norm_identity_under_tent_transfer_at_alpha_one() {
        let mut state = 99u64;
        for t in [1.0, 1.5, 2.0, f64::INFINITY] {
            let p = ClassParams::new(1.0, t).unwrap();
            for _ in 0..25 {
                let s = 1 + (splitmix64_next(&mut state) % 4) as usize;
                let amps: Vec<f64> = (0..s).map(|_| 3.0 * u01(&mut state)).collect();
                let lifted: Vec<f64> = amps.iter().map(|a| SQRT_2 * a).collect();
                let cn = cosine_class_norm_upper(&amps, &p);
                let kn = fourier_class_norm_upper(&lifted, &p);
                assert!(
                    (cn - kn).abs() <= 1e-12 * kn.max(1.0),
                    "t={t}: {cn} vs {kn}"
                );
            }
        }
    }

    #[test]
    fn sweep_errors_decay_and_stay_bounded() {
        let params = ClassParams::new(1.0, f64::INFINITY).unwrap();
        let f = CosProdIntegrand::new(power_amplitudes(2, 1.0, 2.0), Parity::Fourier).unwrap();
        let sweep = convergence_sweep(&[67, 131, 257, 521], &f, &params).unwrap();
        assert!(sweep.all_hold);
        assert!(sweep.records.iter().all(|r| r.error > 0.0));
        let slope = sweep.slope.expect("nonzero errors at every q");
        assert!(slope < 0.0, "slope {slope}");
        for r in &sweep.records {
            assert!((r.bound - 3.0 / (r.n as f64).sqrt() * r.norm_upper).abs() < 1e-12);
        }
    }

    #[test]
    fn sweep_cosine_parity_holds_too() {
        let params = ClassParams::new(1.0, f64::INFINITY).unwrap();
        let g = CosProdIntegrand::new(power_amplitudes(2, 1.0, 2.0), Parity::Cosine).unwrap();
        let sweep = convergence_sweep(&[67, 131, 257], &g, &params).unwrap();
        assert!(sweep.all_hold);
    }

    #[test]
    fn one_dimensional_full_grid_errors_sit_at_float_noise() {
        // In s = 1 the cosine sum over the full grid vanishes exactly, so
        // measured errors are pure rounding noise and the slope fit
        // abstains.
        let params = ClassParams::new(1.0, f64::INFINITY).unwrap();
        let f = CosProdIntegrand::new(vec![1.0], Parity::Fourier).unwrap();
        let sweep = convergence_sweep(&[5, 7, 11, 13], &f, &params).unwrap();
        assert!(sweep.all_hold);
        assert!(sweep.records.iter().all(|r| r.error < 1e-13));
        assert!(sweep.slope.is_none());
    }

    #[test]
    fn zero_amplitudes_integrate_exactly() {
        let params = ClassParams::new(1.0, f64::INFINITY).unwrap();
        let f = CosProdIntegrand::new(vec![0.0, 0.0, 0.0], Parity::Fourier).unwrap();
        let report = integrate_on_size_q(7, &f, &params).unwrap();
        assert_eq!(report.estimate, 1.0);
        assert_eq!(report.error, 0.0);
        assert!(report.holds);
    }

    #[test]
    fn integrand_validation() {
        assert!(CosProdIntegrand::new(vec![], Parity::Fourier).is_err());
        assert!(CosProdIntegrand::new(vec![-0.1], Parity::Fourier).is_err());
        assert!(CosProdIntegrand::new(vec![f64::NAN], Parity::Cosine).is_err());
        assert!(FiniteFourierIntegrand::new(vec![]).is_err());
        assert!(FiniteFourierIntegrand::new(vec![
            (vec![1, 2], Complex64::new(1.0, 0.0)),
            (vec![1], Complex64::new(1.0, 0.0)),
        ])
        .is_err());
        let amps = power_amplitudes(3, 1.0, 2.0);
        assert!((amps[2] - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn report_serde_shape() {
        let params = ClassParams::new(1.0, f64::INFINITY).unwrap();
        let f = CosProdIntegrand::new(vec![0.5, 0.5], Parity::Fourier).unwrap();
        let report = integrate_on_size_q(7, &f, &params).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"N\":7"));
        assert!(json.contains("\"t\":\"inf\""));
        assert!(json.contains("\"parity\":\"fourier\""));
        let back: IntegrationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }
}
