//! Inversive point-set constructions and their digital (radix-p)
//! coordinates.
//!
//! Both constructions take a shift set S = (v_1, ..., v_s) of distinct field
//! elements. The size-q set walks u through all of GF(p^k) and the period-T
//! set walks powers of an element theta of order T | q-1; each node is the
//! vector of inverses (with 0 mapped to 0) of u + v_i, pushed into [0,1)^s
//! coordinate-wise by the trace digit map against a dual basis.

use serde::{Deserialize, Serialize};

use crate::arith::factorize;
use crate::error::{Error, Result};
use crate::field::{DualBasis, FieldElement, FieldSpec, OrderedBasis, TraceTable};

/// Which of the two inversive constructions produced a vector or point set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Construction {
    #[serde(rename = "size-q")]
    SizeQ,
    #[serde(rename = "period-T")]
    PeriodT,
}

impl std::fmt::Display for Construction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Construction::SizeQ => write!(f, "size-q"),
            Construction::PeriodT => write!(f, "period-T"),
        }
    }
}

/// Configuration of the size-q construction: N = q points, one per field
/// element, with `s = S.len()` coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeQConfig {
    pub field: FieldSpec,
    /// The shift set; must be distinct. Its length is the dimension s.
    #[serde(rename = "S")]
    pub shifts: Vec<FieldElement>,
    /// Basis used by the digit map; `None` means the polynomial basis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<OrderedBasis>,
}

/// Configuration of the period-T construction: N = T points indexed by
/// theta^0, ..., theta^(T-1) for an element theta of exact order T | q-1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodTConfig {
    pub field: FieldSpec,
    #[serde(rename = "T")]
    pub period: u64,
    pub theta: FieldElement,
    #[serde(rename = "S")]
    pub shifts: Vec<FieldElement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<OrderedBasis>,
}

/// The first `s` field elements in canonical enumeration order, the default
/// shift set for dimension `s`.
pub fn default_shifts(field: &FieldSpec, s: usize) -> Result<Vec<FieldElement>> {
    if s == 0 {
        return Err(Error::invalid("dimension s must be at least 1"));
    }
    if s as u64 > field.q() {
        return Err(Error::invalid(format!(
            "dimension s = {s} exceeds field size q = {}",
            field.q()
        )));
    }
    Ok(field.elements().take(s).collect())
}

fn check_shifts(field: &FieldSpec, shifts: &[FieldElement]) -> Result<()> {
    if shifts.is_empty() {
        return Err(Error::invalid("shift set must be nonempty"));
    }
    let mut indices = Vec::with_capacity(shifts.len());
    for v in shifts {
        indices.push(field.index_of(v)?);
    }
    indices.sort_unstable();
    if indices.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid("repeated shifts in S"));
    }
    Ok(())
}

impl SizeQConfig {
    pub fn new(field: FieldSpec, shifts: Vec<FieldElement>) -> Result<Self> {
        let cfg = SizeQConfig {
            field,
            shifts,
            basis: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Default-shift configuration in dimension `s`.
    pub fn with_dimension(field: FieldSpec, s: usize) -> Result<Self> {
        let shifts = default_shifts(&field, s)?;
        SizeQConfig::new(field, shifts)
    }

    pub fn s(&self) -> usize {
        self.shifts.len()
    }

    pub fn validate(&self) -> Result<()> {
        self.field.validate()?;
        check_shifts(&self.field, &self.shifts)
    }
}

impl PeriodTConfig {
    /// Picks theta = g^((q-1)/T) for the first generator g in canonical
    /// order, matching [`FieldSpec::element_of_order`].
    pub fn new(field: FieldSpec, period: u64, shifts: Vec<FieldElement>) -> Result<Self> {
        let theta = field.element_of_order(period)?;
        PeriodTConfig::with_theta(field, period, theta, shifts)
    }

    pub fn with_theta(
        field: FieldSpec,
        period: u64,
        theta: FieldElement,
        shifts: Vec<FieldElement>,
    ) -> Result<Self> {
        let cfg = PeriodTConfig {
            field,
            period,
            theta,
            shifts,
            basis: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn s(&self) -> usize {
        self.shifts.len()
    }

    pub fn validate(&self) -> Result<()> {
        self.field.validate()?;
        check_shifts(&self.field, &self.shifts)?;
        let q = self.field.q();
        if self.period == 0 {
            return Err(Error::invalid("period T must be positive"));
        }
        if (q - 1) % self.period != 0 {
            return Err(Error::OrderDoesNotDivide {
                t: self.period,
                q,
            });
        }
        // theta must have exact order T, not merely an order dividing T.
        self.field.check_element(&self.theta)?;
        let one = self.field.one();
        if self.field.pow(&self.theta, self.period)? != one {
            return Err(Error::invalid("theta^T != 1"));
        }
        for (r, _) in factorize(self.period) {
            if self.field.pow(&self.theta, self.period / r)? == one {
                return Err(Error::invalid(format!(
                    "theta has order dividing T/{r}, not exact order T"
                )));
            }
        }
        Ok(())
    }
}

/// The raw vector set in GF(p^k)^s before the digit map: entry (n, i) is
/// the canonical index of the field element z_{n,i}.
#[derive(Debug, Clone, PartialEq)]
pub struct InversiveVectors {
    pub field: FieldSpec,
    pub construction: Construction,
    pub n: usize,
    pub s: usize,
    indices: Vec<u64>,
}

impl InversiveVectors {
    /// The size-q vector set: z_{u,i} = inv(u + v_i) with u running over
    /// all of GF(p^k) in canonical order.
    pub fn size_q(cfg: &SizeQConfig) -> Result<Self> {
        cfg.validate()?;
        let field = &cfg.field;
        let q = field.q();
        let s = cfg.s();
        let mut indices = Vec::with_capacity((q as usize) * s);
        for u_idx in 0..q {
            let u = field.from_index_raw(u_idx);
            for v in &cfg.shifts {
                let z = field.add_raw(&u, v);
                let zi = field.inv_or_zero_raw(&z);
                indices.push(field.index_raw(&zi));
            }
        }
        Ok(InversiveVectors {
            field: field.clone(),
            construction: Construction::SizeQ,
            n: q as usize,
            s,
            indices,
        })
    }

    /// The period-T vector set: z_{n,i} = inv(theta^n + v_i), n = 0..T-1.
    pub fn period_t(cfg: &PeriodTConfig) -> Result<Self> {
        cfg.validate()?;
        let field = &cfg.field;
        let s = cfg.s();
        let t = cfg.period as usize;
        let mut indices = Vec::with_capacity(t * s);
        let mut power = field.one();
        for n in 0..t {
            for v in &cfg.shifts {
                let z = field.add_raw(&power, v);
                let zi = field.inv_or_zero_raw(&z);
                indices.push(field.index_raw(&zi));
            }
            if n + 1 < t {
                power = field.mul_raw(&power, &cfg.theta);
            }
        }
        Ok(InversiveVectors {
            field: field.clone(),
            construction: Construction::PeriodT,
            n: t,
            s,
            indices,
        })
    }

    /// Canonical index of entry (n, i).
    pub fn index(&self, n: usize, i: usize) -> u64 {
        self.indices[n * self.s + i]
    }

    /// Field element at entry (n, i).
    pub fn element(&self, n: usize, i: usize) -> FieldElement {
        self.field.from_index_raw(self.index(n, i))
    }

    /// Applies the digit map against the dual of `basis` (polynomial basis
    /// when `None`), producing exact radix-p coordinates.
    pub fn to_digital(&self, basis: Option<&OrderedBasis>) -> Result<DigitalPointSet> {
        let field = &self.field;
        let poly;
        let basis = match basis {
            Some(b) => b,
            None => {
                poly = field.polynomial_basis();
                &poly
            }
        };
        let dual = field.dual_basis(basis)?;
        let table = TraceTable::new(field);
        let k = field.k;
        let mut digits = Vec::with_capacity(self.n * self.s * k);
        let mut numerators = Vec::with_capacity(self.n * self.s);
        for &idx in &self.indices {
            let z = field.from_index_raw(idx);
            let mut m = 0u64;
            for d in dual.elements() {
                let digit = table.trace_coeffs(field.mul_raw(d, &z).coeffs());
                digits.push(digit);
                m = m * field.p + digit;
            }
            numerators.push(m);
        }
        Ok(DigitalPointSet {
            p: field.p,
            k,
            n: self.n,
            s: self.s,
            construction: self.construction,
            digits,
            numerators,
        })
    }
}

/// Digit vector of a single element: digit j (1-based) is Tr(d_j * z) for
/// the dual basis elements d_j, so that z reconstructs as sum of
/// digit_j * b_j and the coordinate in [0,1) is sum of digit_j * p^(-j).
pub fn digits_of(field: &FieldSpec, dual: &DualBasis, z: &FieldElement) -> Result<Vec<u64>> {
    field.check_element(z)?;
    if dual.elements().len() != field.k {
        return Err(Error::invalid(format!(
            "dual basis must have k = {} elements",
            field.k
        )));
    }
    let mut out = Vec::with_capacity(field.k);
    for d in dual.elements() {
        field.check_element(d)?;
        out.push(field.trace_raw(&field.mul_raw(d, z)));
    }
    Ok(out)
}

/// Packs a digit vector (most significant digit first) into the exact
/// numerator m with coordinate m / p^k.
pub fn numerator_from_digits(p: u64, digits: &[u64]) -> u64 {
    digits.iter().fold(0, |m, &d| m * p + d)
}

/// A point set with exact coordinates m_{n,i} / p^k and the underlying
/// radix-p digit expansion (k digits per coordinate, most significant
/// first).
#[derive(Debug, Clone, PartialEq)]
pub struct DigitalPointSet {
    pub p: u64,
    pub k: usize,
    pub n: usize,
    pub s: usize,
    pub construction: Construction,
    digits: Vec<u64>,
    numerators: Vec<u64>,
}

impl DigitalPointSet {
    /// The common denominator p^k.
    pub fn den(&self) -> u64 {
        self.p.pow(self.k as u32)
    }

    /// Exact numerator of coordinate i of point n.
    pub fn numerator(&self, n: usize, i: usize) -> u64 {
        self.numerators[n * self.s + i]
    }

    /// Digit j (0-based, most significant first) of coordinate i of point n.
    pub fn digit(&self, n: usize, i: usize, j: usize) -> u64 {
        self.digits[(n * self.s + i) * self.k + j]
    }

    /// Coordinate as a float (exact value is numerator / p^k).
    pub fn coord_f64(&self, n: usize, i: usize) -> f64 {
        self.numerator(n, i) as f64 / self.den() as f64
    }

    /// Drops the digit expansion, keeping the exact rational coordinates.
    pub fn to_rational(&self) -> RationalPointSet {
        RationalPointSet {
            den: self.den(),
            n: self.n,
            s: self.s,
            numerators: self.numerators.clone(),
        }
    }

    /// Restriction to a coordinate subset `u` (1-based, strictly
    /// increasing). The result has dimension `u.len()`.
    pub fn project(&self, u: &[usize]) -> Result<DigitalPointSet> {
        check_subset(u, self.s)?;
        let su = u.len();
        let mut digits = Vec::with_capacity(self.n * su * self.k);
        let mut numerators = Vec::with_capacity(self.n * su);
        for n in 0..self.n {
            for &i in u {
                let i = i - 1;
                numerators.push(self.numerator(n, i));
                let base = (n * self.s + i) * self.k;
                digits.extend_from_slice(&self.digits[base..base + self.k]);
            }
        }
        Ok(DigitalPointSet {
            p: self.p,
            k: self.k,
            n: self.n,
            s: su,
            construction: self.construction,
            digits,
            numerators,
        })
    }
}

/// Validates a 1-based, strictly increasing coordinate subset for dimension s.
pub(crate) fn check_subset(u: &[usize], s: usize) -> Result<()> {
    if u.is_empty() {
        return Err(Error::invalid("coordinate subset must be nonempty"));
    }
    if u.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid(
            "coordinate subset must be strictly increasing",
        ));
    }
    if u[0] < 1 || *u.last().unwrap() > s {
        return Err(Error::invalid(format!(
            "coordinate subset out of range 1..={s}"
        )));
    }
    Ok(())
}

/// Points with exact rational coordinates over one common denominator.
/// This is the currency of the discrepancy and integration modules; both
/// inversive constructions and the tent transform produce it.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalPointSet {
    pub den: u64,
    pub n: usize,
    pub s: usize,
    pub numerators: Vec<u64>,
}

impl RationalPointSet {
    pub fn new(den: u64, n: usize, s: usize, numerators: Vec<u64>) -> Result<Self> {
        if den == 0 {
            return Err(Error::invalid("denominator must be positive"));
        }
        if numerators.len() != n * s {
            return Err(Error::invalid("numerator matrix has wrong size"));
        }
        if numerators.iter().any(|&m| m > den) {
            return Err(Error::invalid("coordinate above 1"));
        }
        Ok(RationalPointSet {
            den,
            n,
            s,
            numerators,
        })
    }

    pub fn numerator(&self, n: usize, i: usize) -> u64 {
        self.numerators[n * self.s + i]
    }

    pub fn coord_f64(&self, n: usize, i: usize) -> f64 {
        self.numerator(n, i) as f64 / self.den as f64
    }

    /// Writes the float coordinates of point `row` into `out`.
    pub fn fill_row_f64(&self, row: usize, out: &mut [f64]) {
        let den = self.den as f64;
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.numerators[row * self.s + i] as f64 / den;
        }
    }

    /// Restriction to a 1-based, strictly increasing coordinate subset.
    pub fn project(&self, u: &[usize]) -> Result<RationalPointSet> {
        check_subset(u, self.s)?;
        let mut numerators = Vec::with_capacity(self.n * u.len());
        for n in 0..self.n {
            for &i in u {
                numerators.push(self.numerator(n, i - 1));
            }
        }
        Ok(RationalPointSet {
            den: self.den,
            n: self.n,
            s: u.len(),
            numerators,
        })
    }
}

/// Generates the size-q digital point set (N = q points).
pub fn generate_size_q(cfg: &SizeQConfig) -> Result<DigitalPointSet> {
    InversiveVectors::size_q(cfg)?.to_digital(cfg.basis.as_ref())
}

/// Generates the period-T digital point set (N = T points).
pub fn generate_period_t(cfg: &PeriodTConfig) -> Result<DigitalPointSet> {
    InversiveVectors::period_t(cfg)?.to_digital(cfg.basis.as_ref())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn gf(p: u64, k: usize) -> FieldSpec {
        make_field(p, k).unwrap()
    }

    fn size_q_default(p: u64, k: usize, s: usize) -> DigitalPointSet {
        let field = gf(p, k);
        generate_size_q(&SizeQConfig::with_dimension(field, s).unwrap()).unwrap()
    }

    #[test]
    fn digit_pins_gf4() {
        let spec = gf(2, 2);
        let dual = spec.dual_basis(&spec.polynomial_basis()).unwrap();
        let x = spec.element(&[0, 1]).unwrap();
        let x1 = spec.element(&[1, 1]).unwrap();
        assert_eq!(digits_of(&spec, &dual, &x).unwrap(), vec![0, 1]);
        assert_eq!(digits_of(&spec, &dual, &x1).unwrap(), vec![1, 1]);
        assert_eq!(numerator_from_digits(2, &[0, 1]), 1);
        assert_eq!(numerator_from_digits(2, &[1, 1]), 3);
    }

    #[test]
    fn digits_reconstruct_the_element() {
        for (p, k) in [(2u64, 2usize), (2, 3), (3, 2), (5, 2), (2, 4), (3, 3)] {
            let spec = gf(p, k);
            let basis = spec.polynomial_basis();
            let dual = spec.dual_basis(&basis).unwrap();
            for z in spec.elements() {
                let digits = digits_of(&spec, &dual, &z).unwrap();
                let mut back = spec.zero();
                for (c, b) in digits.iter().zip(basis.elements()) {
                    let scalar = spec.from_index(*c).unwrap();
                    back = spec
                        .add(&back, &spec.mul(&scalar, b).unwrap())
                        .unwrap();
                }
                assert_eq!(back, z, "p={p}, k={k}");
            }
        }
    }

    #[test]
    fn size_q_pins() {
        // GF(5), S = {0}: inverses of 0..4 are 0,1,3,2,4.
        let ps = size_q_default(5, 1, 1);
        let nums: Vec<u64> = (0..5).map(|n| ps.numerator(n, 0)).collect();
        assert_eq!(nums, vec![0, 1, 3, 2, 4]);
        assert_eq!(ps.den(), 5);

        // GF(4), S = {0}: coordinates 0, 1/2, 3/4, 1/4.
        let ps = size_q_default(2, 2, 1);
        let nums: Vec<u64> = (0..4).map(|n| ps.numerator(n, 0)).collect();
        assert_eq!(nums, vec![0, 2, 3, 1]);
        assert_eq!(ps.den(), 4);

        // GF(7), S = {0, 1}: numerator pairs over 7.
        let ps = size_q_default(7, 1, 2);
        let pairs: Vec<(u64, u64)> = (0..7).map(|n| (ps.numerator(n, 0), ps.numerator(n, 1))).collect();
        assert_eq!(
            pairs,
            vec![(0, 1), (1, 4), (4, 5), (5, 2), (2, 3), (3, 6), (6, 0)]
        );
    }

    #[test]
    fn period_t_pins_gf7() {
        let field = gf(7, 1);
        let shifts = default_shifts(&field, 1).unwrap();
        let cfg = PeriodTConfig::new(field.clone(), 3, shifts).unwrap();
        assert_eq!(cfg.theta, field.element(&[2]).unwrap());
        let ps = generate_period_t(&cfg).unwrap();
        assert_eq!(ps.n, 3);
        let nums: Vec<u64> = (0..3).map(|n| ps.numerator(n, 0)).collect();
        assert_eq!(nums, vec![1, 4, 2]); // inverses of 1, 2, 4
    }

    #[test]
    fn period_recurrence_wraps() {
        for (p, k, t) in [(7u64, 1usize, 3u64), (7, 1, 6), (13, 1, 4), (2, 4, 5), (3, 2, 8)] {
            let field = gf(p, k);
            let theta = field.element_of_order(t).unwrap();
            // theta^(n+T) = theta^n makes the construction T-periodic.
            assert_eq!(field.pow(&theta, t).unwrap(), field.one());
            let shifts = default_shifts(&field, 2.min(field.q() as usize)).unwrap();
            let cfg = PeriodTConfig::with_theta(field, t, theta, shifts).unwrap();
            let a = generate_period_t(&cfg).unwrap();
            let b = generate_period_t(&cfg).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn projection_commutes_with_generation() {
        for (p, k) in [(5u64, 1usize), (2, 3), (3, 2)] {
            let field = gf(p, k);
            let s = 4.min(field.q() as usize);
            let cfg = SizeQConfig::with_dimension(field.clone(), s).unwrap();
            let full = generate_size_q(&cfg).unwrap();
            for u in [vec![1usize], vec![2], vec![1, 3], vec![2, 4], vec![1, 2, 4]] {
                if *u.last().unwrap() > s {
                    continue;
                }
                let projected = full.project(&u).unwrap();
                let sub_shifts: Vec<FieldElement> =
                    u.iter().map(|&i| cfg.shifts[i - 1].clone()).collect();
                let sub_cfg = SizeQConfig::new(field.clone(), sub_shifts).unwrap();
                let direct = generate_size_q(&sub_cfg).unwrap();
                assert_eq!(projected, direct, "p={p}, k={k}, u={u:?}");
            }
        }
    }

    #[test]
    fn one_dimensional_projections_cover_the_grid() {
        for (p, k) in [(5u64, 1usize), (7, 1), (2, 2), (2, 3), (3, 2), (13, 1)] {
            let field = gf(p, k);
            let q = field.q();
            let s = 3.min(q as usize);
            let ps = size_q_default(p, k, s);
            for i in 0..s {
                let mut nums: Vec<u64> = (0..ps.n).map(|n| ps.numerator(n, i)).collect();
                nums.sort_unstable();
                let expect: Vec<u64> = (0..q).collect();
                assert_eq!(nums, expect, "p={p}, k={k}, coord {i}");
            }
        }
    }

    #[test]
    fn default_shifts_pin() {
        let field = gf(2, 2);
        let s = default_shifts(&field, 3).unwrap();
        assert_eq!(
            s,
            vec![
                field.element(&[0, 0]).unwrap(),
                field.element(&[1, 0]).unwrap(),
                field.element(&[0, 1]).unwrap(),
            ]
        );
        assert!(default_shifts(&field, 5).is_err());
    }

    #[test]
    fn config_validation_errors() {
        let field = gf(5, 1);
        let zero = field.zero();
        assert!(SizeQConfig::new(field.clone(), vec![zero.clone(), zero.clone()]).is_err());
        assert!(SizeQConfig::new(field.clone(), vec![]).is_err());
        assert!(matches!(
            PeriodTConfig::new(field.clone(), 3, vec![zero.clone()]),
            Err(Error::OrderDoesNotDivide { .. })
        ));
        // theta = 1 does not have exact order 2.
        let bad = PeriodTConfig {
            field: field.clone(),
            period: 2,
            theta: field.one(),
            shifts: vec![zero],
            basis: None,
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn config_serde_roundtrip() {
        let field = gf(7, 1);
        let cfg = SizeQConfig::with_dimension(field.clone(), 2).unwrap();
        let json = serde_json::to_string(&cfg).unwrap();
        let back: SizeQConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cfg);

        let cfg = PeriodTConfig::new(field, 6, vec![gf(7, 1).zero()]).unwrap();
        let json = serde_json::to_string(&cfg).unwrap();
        assert!(json.contains("\"T\":6"));
        let back: PeriodTConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cfg);
        back.validate().unwrap();
    }

    #[test]
    fn custom_basis_changes_digits_but_reconstructs() {
        let spec = gf(3, 2);
        // Basis {x, 1} (reversed polynomial basis) is still a basis.
        let basis = OrderedBasis::new(vec![
            spec.element(&[0, 1]).unwrap(),
            spec.element(&[1, 0]).unwrap(),
        ]);
        let cfg = SizeQConfig {
            field: spec.clone(),
            shifts: default_shifts(&spec, 2).unwrap(),
            basis: Some(basis.clone()),
        };
        let ps = generate_size_q(&cfg).unwrap();
        let default_ps = size_q_default(3, 2, 2);
        assert_ne!(ps, default_ps);
        // Multisets of 1-d coordinates still cover the full grid.
        let mut nums: Vec<u64> = (0..ps.n).map(|n| ps.numerator(n, 0)).collect();
        nums.sort_unstable();
        assert_eq!(nums, (0..9).collect::<Vec<u64>>());
    }

    #[test]
    fn rational_view_and_projection() {
        let ps = size_q_default(5, 1, 2);
        let r = ps.to_rational();
        assert_eq!(r.den, 5);
        assert_eq!(r.coord_f64(1, 0), 0.2);
        let proj = r.project(&[2]).unwrap();
        assert_eq!(proj.s, 1);
        assert_eq!(proj.numerator(0, 0), ps.numerator(0, 1));
        assert!(r.project(&[0]).is_err());
        assert!(r.project(&[1, 1]).is_err());
        assert!(r.project(&[3]).is_err());
    }
}
