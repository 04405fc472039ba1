//! Exponent and divisor bookkeeping behind the factorization
//! `τ_M^{−2^{g+1}(2^g+1)} = C_M ‖Ψ_{M⊥}‖^{2^g} ‖χ_g‖^{16}` and the obstruction for
//! `(r(M), δ(M)) = (10, 0)`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::table::Table1Row;
use crate::arith::{q, Q};
use crate::borcherds::{
    borcherds_divisor, construct_f, petersson_norm_point, product_eval, tube_period, weight_closed_form, TubePoint, VVForm,
};
use crate::error::{Error, Result};
use crate::lattice::{matrix, Lattice, LatticeExpr, LatticeTriple};
use crate::siegel::{log_chi_g8_petersson, SiegelPoint};
use crate::weil::WeilRep;

fn pow2(e: i64) -> Q {
    if e >= 0 {
        Q::from(1i64 << e)
    } else {
        q(1, 1i64 << -e)
    }
}

/// Coefficient of the form `c + c_a·a` where `a` is the unknown multiplicity of
/// `D′` in the pullback of the theta-null divisor.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Affine {
    pub c: Q,
    pub a: Q,
}

impl Affine {
    pub fn constant(c: Q) -> Affine {
        Affine { c, a: Q::zero() }
    }

    pub fn eval(&self, a: i64) -> Q {
        self.c + self.a * Q::from(a)
    }
}

impl core::ops::Add for Affine {
    type Output = Affine;
    fn add(self, o: Affine) -> Affine {
        Affine { c: self.c + o.c, a: self.a + o.a }
    }
}

/// A `(1,1)`-current written in the basis `ω`, `J*ω_A`, `δ_D′`, `δ_D″`, `δ_E`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Current {
    pub omega: Q,
    pub j_omega: Q,
    pub d_prime: Affine,
    pub d_double_prime: Q,
    pub e: Q,
}

impl core::ops::Add for Current {
    type Output = Current;
    fn add(self, o: Current) -> Current {
        Current {
            omega: self.omega + o.omega,
            j_omega: self.j_omega + o.j_omega,
            d_prime: self.d_prime + o.d_prime,
            d_double_prime: self.d_double_prime + o.d_double_prime,
            e: self.e + o.e,
        }
    }
}

/// One identity `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub lhs: Q,
    pub rhs: Q,
    /// The divisor the check refers to is empty, so the identity carries no
    /// geometric content even when it holds.
    pub vacuous: bool,
}

impl Check {
    fn new(name: &'static str, lhs: Q, rhs: Q) -> Check {
        Check { name, lhs, rhs, vacuous: false }
    }

    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Weight and divisor data of the lift on `M⊥` that enter the bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftData {
    pub weight: Q,
    pub d_prime: Q,
    /// `None` when `D″` is empty.
    pub d_double_prime: Option<Q>,
}

impl LiftData {
    /// Closed-form weight and the standard divisor `D′ + (2^k+1)D″`, with `D″`
    /// empty when no discriminant class has `q ≡ −1/2`.
    pub fn closed_form(perp: &Lattice) -> Result<LiftData> {
        let t = perp.invariants()?;
        let w = weight_closed_form(&t).ok_or_else(|| Error::OutOfRange(format!("no closed-form weight for {t}")))?;
        let rep = WeilRep::new(perp)?;
        let has_d2 = (0..rep.size()).any(|i| rep.q_class(i) == 3);
        let k = t.genus_k()?;
        let d2 = has_d2.then(|| Q::from((1i64 << k) + 1));
        Ok(LiftData { weight: Q::from(w), d_prime: Q::from(1), d_double_prime: d2 })
    }

    /// Weight `c_0(0)/2` and the divisor read off the principal part of `F_Λ`.
    /// Errors if the divisor has components beyond `D′` and `D″`.
    pub fn from_series(f: &VVForm) -> Result<LiftData> {
        let w = f.constant_term()? / num_rational::BigRational::from_integer(2.into());
        let ledger = borcherds_divisor(f)?.ledger(f.rep());
        if !ledger.extras.is_empty() {
            return Err(Error::Inconsistent(format!("divisor has extra components: {ledger}")));
        }
        Ok(LiftData { weight: big_q(&w)?, d_prime: int_q(&ledger.d_prime)?, d_double_prime: ledger.d_double_prime.as_ref().map(int_q).transpose()? })
    }
}

fn int_q(b: &BigInt) -> Result<Q> {
    b.to_i64().map(Q::from).ok_or_else(|| Error::OutOfRange("coefficient overflows i64".into()))
}

fn big_q(b: &num_rational::BigRational) -> Result<Q> {
    Ok(Q::new(int_q(b.numer())?.to_integer(), int_q(b.denom())?.to_integer()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thm91Report {
    pub perp: String,
    pub g: i64,
    pub r_m: i64,
    pub ell: i64,
    /// Exponents `(τ, ‖Ψ‖, ‖χ_g‖)` scaled by `ℓ`.
    pub exponents: (Q, Q, Q),
    pub checks: Vec<Check>,
    /// `−dd^c log` of `τ^N · ‖Ψ^{2^{g−1}ℓ}‖² · ‖χ_g^{8ℓ}‖²`.
    pub residual: Current,
    /// What the residual must be: `−2aℓ·δ_D′ − δ_E`.
    pub expected_residual: Current,
}

impl Thm91Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::holds) && self.residual == self.expected_residual
    }
}

/// The bookkeeping for one row with closed-form lift data.
pub fn thm91_consistency(row: &Table1Row, ell: i64) -> Result<Thm91Report> {
    row.validate()?;
    thm91_check(row, &LiftData::closed_form(&row.lattice()?)?, ell)
}

/// Exact check of the weight and divisor balance for the factorization attached
/// to `row`, given the lift data on `M⊥`. For `g ≤ 2` the multiplicity `a` is
/// zero; it is kept symbolic in every case.
pub fn thm91_check(row: &Table1Row, lift: &LiftData, ell: i64) -> Result<Thm91Report> {
    if ell < 1 {
        return Err(Error::OutOfRange("ℓ must be positive".into()));
    }
    let perp = row.validate()?;
    let m = perp.complement()?;
    let g = m.genus_g()?;
    let l = Q::from(ell);
    let two_g = pow2(g);
    let rm6 = Q::from(m.r - 6);
    // N = 2^{g+1}(2^g+1)ℓ and ν = N/4.
    let n = pow2(g + 1) * (two_g + 1) * l;
    let nu = n / Q::from(4);
    let psi_pow = pow2(g - 1) * l;

    let tau = Current {
        omega: -n * rm6 / Q::from(4),
        j_omega: -n,
        d_prime: Affine::constant(nu),
        d_double_prime: nu,
        e: Q::zero(),
    };
    let psi = Current {
        omega: psi_pow * lift.weight,
        j_omega: Q::zero(),
        d_prime: Affine::constant(-psi_pow * lift.d_prime),
        d_double_prime: -psi_pow * lift.d_double_prime.unwrap_or_else(|| two_g + 1),
        e: Q::zero(),
    };
    let chi = Current {
        omega: Q::zero(),
        j_omega: pow2(g + 1) * (two_g + 1) * l,
        d_prime: Affine { c: -Q::from(2) * pow2(2 * g - 2) * l, a: -Q::from(2) * l },
        d_double_prime: Q::zero(),
        e: Q::from(-1),
    };
    let residual = tau + psi + chi;
    let expected_residual = Current {
        d_prime: Affine { c: Q::zero(), a: -Q::from(2) * l },
        e: Q::from(-1),
        ..Current::default()
    };

    let half = pow2(g - 1);
    let mut checks = vec![
        Check::new("weight", half * lift.weight, half * (two_g + 1) * rm6),
        Check {
            vacuous: perp.l == perp.r,
            ..Check::new("D′ balance", half * lift.d_prime + Q::from(2) * pow2(2 * g - 2), half * (two_g + 1))
        },
        Check {
            vacuous: lift.d_double_prime.is_none(),
            ..Check::new("D″ balance", half * lift.d_double_prime.unwrap_or_else(|| two_g + 1), half * (two_g + 1))
        },
        Check::new("χ weight slot", Q::from(8) * l * pow2(g - 2) * (two_g + 1), Q::from(4) * nu),
        Check::new("ω weight slot", nu * rm6, psi_pow * lift.weight),
    ];
    if g == 0 {
        // χ₀ = 1 contributes nothing; the D′ identity is then about an empty divisor.
        checks.push(Check::new("χ₀ slot", Q::zero(), Q::zero()));
    }
    Ok(Thm91Report {
        perp: format!("{}", row.perp),
        g,
        r_m: m.r,
        ell,
        exponents: (n, two_g * l, Q::from(16) * l),
        checks,
        residual,
        expected_residual,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thm93Report {
    pub g: i64,
    pub ell: i64,
    pub exponents: (Q, Q, Q),
    pub weight: Q,
    /// `(D′, D″, H(1_Λ, −1/2))` coefficients of `Ψ^{2ℓ}` from the series.
    pub psi_divisor: (Q, Q, Q),
    /// The same coefficients predicted from `τ^{40ℓ}` and `χ_2^{8ℓ}`.
    pub predicted: (Q, Q, Q),
    pub checks: Vec<Check>,
}

impl Thm93Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::holds) && self.psi_divisor == self.predicted
    }
}

/// The variant for `M = A1⁺ ⊕ A1⁸`, `M⊥ = U² ⊕ E8(2) ⊕ A1`, where the lift has
/// the extra component `−8·H(1_Λ, −1/2)`. Uses the series data of `F_{M⊥}`.
pub fn thm93_consistency(ell: i64) -> Result<Thm93Report> {
    if ell < 1 {
        return Err(Error::OutOfRange("ℓ must be positive".into()));
    }
    let lat = LatticeExpr::parse("U^2+E8(2)+A1")?.eval()?;
    let perp = lat.invariants()?;
    let m = LatticeExpr::parse("A1plus+A1^8")?.eval()?.invariants()?;
    if perp.complement()? != m {
        return Err(Error::Inconsistent(format!("{perp} is not complementary to {m}")));
    }
    let g = m.genus_g()?;
    let l = Q::from(ell);
    let f = construct_f(&lat, q(1, 1))?;
    let weight = big_q(&(f.constant_term()? / num_rational::BigRational::from_integer(2.into())))?;
    let ledger = borcherds_divisor(&f)?.ledger(f.rep());
    let one = f.rep().characteristic_index();
    let h = ledger.extras.iter().filter(|(i, n, _)| *i == one && *n == q(-1, 4)).map(|e| int_q(&e.2)).sum::<Result<Q>>()?;
    if ledger.extras.iter().any(|(i, n, _)| *i != one || *n != q(-1, 4)) {
        return Err(Error::Inconsistent(format!("unexpected divisor components: {ledger}")));
    }
    let d2 = ledger.d_double_prime.as_ref().map(int_q).transpose()?.unwrap_or_default();
    let psi_pow = pow2(g - 1) * l;
    let psi_divisor = (psi_pow * int_q(&ledger.d_prime)?, psi_pow * d2, psi_pow * h);

    let n = pow2(g + 1) * (pow2(g) + 1) * l;
    let nu = n / Q::from(4);
    // χ_2 pulls back to −8·δ_D′ − 16·δ_H per unit ℓ.
    let predicted = (nu - Q::from(8) * l, nu, Q::from(-16) * l);
    let exponents = (n, pow2(g) * l, Q::from(16) * l);
    let checks = vec![
        Check::new("τ exponent", n, Q::from(40) * l),
        Check::new("Ψ exponent", exponents.1, Q::from(4) * l),
        Check::new("χ exponent", exponents.2, Q::from(16) * l),
        Check::new("weight", psi_pow * weight, nu * Q::from(m.r - 6)),
        Check::new("weight value", psi_pow * weight, Q::from(30) * l),
    ];
    Ok(Thm93Report { g, ell, exponents, weight, psi_divisor, predicted, checks })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prop92Report {
    pub m: LatticeTriple,
    pub g: i64,
    /// Weight of `φ = Ψ^{ν} ⊗ (χ_g^{8ℓ})^{2^g−1}` per unit `ℓ`, both slots.
    pub phi_weight: (Q, Q),
    /// Weight of `Φ_M^{2^g−1}` per unit `ℓ`.
    pub big_phi_weight: (Q, Q),
    /// `D′` coefficient of `div φ` per unit `ℓ`, and the `E` coefficient.
    pub phi_divisor: (Affine, Q),
    /// `D′` coefficient of `div ψ` per unit `ℓ`, and the `E` coefficient.
    pub psi_divisor: (Affine, Q),
    /// Smallest `D′` coefficient seen over the scanned `(a, ℓ)` box.
    pub min_scanned: Q,
}

impl Prop92Report {
    /// `ψ` has weight zero, yet `div ψ` is effective and nonzero for every
    /// `a ≥ 0`, `ℓ ≥ 1`.
    pub fn obstructs(&self) -> bool {
        let c = self.psi_divisor.0;
        self.phi_weight == self.big_phi_weight && c.c > Q::zero() && c.a >= Q::zero() && self.psi_divisor.1 >= Q::zero() && self.min_scanned > Q::zero()
    }
}

/// The four non-exceptional types with `(r(M), δ(M)) = (10, 0)`.
pub fn prop92_rows() -> Vec<LatticeExpr> {
    ["U+E8", "U+D8", "U+D4^2", "U(2)+D4^2"].iter().map(|s| LatticeExpr::parse(s).expect("well formed")).collect()
}

/// Recomputes the divisor of the would-be weight-zero function `ψ` for a type
/// non-exceptional `M` with `(r, δ) = (10, 0)`, and scans `a < scan`,
/// `1 ≤ ℓ ≤ scan` on top of the symbolic argument.
pub fn prop92_obstruction(m: &LatticeTriple, scan: i64) -> Result<Prop92Report> {
    if m.r != 10 || m.delta != 0 {
        return Err(Error::OutOfRange(format!("{m} does not have (r, δ) = (10, 0)")));
    }
    // (10,10,0) = U(2)+E8(2) and (10,8,0) = U+E8(2) have no fixed curve of
    // genus g(M) and are excluded.
    if m.l > 6 {
        return Err(Error::OutOfRange(format!("{m} is an exceptional type")));
    }
    let g = m.genus_g()?;
    let perp = m.complement()?;
    let w = Q::from(weight_closed_form(&perp).ok_or_else(|| Error::OutOfRange(format!("no weight for {perp}")))?);
    let two_g = pow2(g);
    let nu = pow2(g - 1) * (two_g + 1);
    let chi_w = pow2(g + 1) * (two_g + 1);
    let phi_weight = (nu * w, (two_g - 1) * chi_w);
    let big_phi_weight = ((two_g - 1) * nu * Q::from(m.r - 6), (two_g - 1) * Q::from(4) * nu);
    // Ψ has divisor D′ (δ(M⊥) = 0 leaves D″ empty); χ_g^{8} pulls back to
    // 2(2^{2g−2}+a)·D′ + E.
    let chi_d = Affine { c: Q::from(2) * pow2(2 * g - 2), a: Q::from(2) };
    let phi_d = Affine {
        c: nu + (two_g - 1) * chi_d.c,
        a: (two_g - 1) * chi_d.a,
    };
    let psi_d = Affine { c: phi_d.c - (two_g - 1) * nu, a: phi_d.a };
    let mut min_scanned: Option<Q> = None;
    for a in 0..scan.max(1) {
        for ell in 1..=scan.max(1) {
            let v = psi_d.eval(a) * Q::from(ell);
            min_scanned = Some(min_scanned.map_or(v, |m| m.min(v)));
        }
    }
    Ok(Prop92Report {
        m: *m,
        g,
        phi_weight,
        big_phi_weight,
        phi_divisor: (phi_d, two_g - 1),
        psi_divisor: (psi_d, two_g - 1),
        min_scanned: min_scanned.unwrap_or_default(),
    })
}

/// `log` of `(‖Ψ‖^{2^g} ‖χ_g‖^{16})^ℓ` with its parts.
#[derive(Clone, Debug, PartialEq)]
pub struct RhsValue {
    pub log_value: f64,
    /// `log ‖Ψ‖²`, without the Weyl factor in modulus-only mode.
    pub log_psi_norm2: f64,
    /// `log ‖χ_g⁸‖²`; zero when `g = 0`.
    pub log_chi8_norm2: f64,
    pub tail: f64,
}

impl RhsValue {
    pub fn value(&self) -> f64 {
        libm::exp(self.log_value)
    }
}

/// Evaluates the automorphic side for `Λ = U(N) ⊕ L` at the tube point `z` and
/// the period point `Σ` of genus `g = Σ.g()`. The weight of `Ψ` is `c_0(0)/2`
/// of `f`.
pub fn rhs_invariant(
    f: &VVForm,
    z: &TubePoint,
    sigma: &SiegelPoint,
    weyl: Option<&[Q]>,
    bound: f64,
    ell: i64,
    prec: usize,
) -> Result<RhsValue> {
    if ell < 1 {
        return Err(Error::OutOfRange("ℓ must be positive".into()));
    }
    let g = sigma.g() as i32;
    let pv = product_eval(f, z, weyl, bound)?;
    let gram = matrix::block_diag(&vec![vec![0, z.n], vec![z.n, 0]], z.lattice.gram());
    let eta = tube_period(z);
    let mut e1 = vec![0.0; eta.len()];
    e1[0] = 1.0;
    let k = petersson_norm_point(&gram, &eta, &e1, 1.0, 1.0)?;
    let w = f.constant_term()?.to_f64().unwrap_or(f64::NAN) / 2.0;
    let log_psi_norm2 = w * libm::log(k) + 2.0 * pv.log_abs;
    let log_chi8_norm2 = if g == 0 { 0.0 } else { log_chi_g8_petersson(sigma, prec)? };
    let half = libm::pow(2.0, f64::from(g - 1));
    let log_value = ell as f64 * (half * log_psi_norm2 + log_chi8_norm2);
    Ok(RhsValue { log_value, log_psi_norm2, log_chi8_norm2, tail: ell as f64 * half * 2.0 * pv.tail })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::k3graph::table1;

    #[test]
    fn all_rows_balance() {
        for row in table1() {
            for ell in [1, 2, 5] {
                let r = thm91_consistency(&row, ell).unwrap();
                assert!(r.passed(), "{r:?}");
            }
        }
    }

    #[test]
    fn worked_example() {
        let rows = table1();
        let row = rows.iter().find(|r| r.perp.to_string() == "U^2+A1").unwrap();
        let r = thm91_consistency(row, 1).unwrap();
        assert_eq!((r.g, r.r_m), (2, 17));
        let w = &r.checks[0];
        assert_eq!(w.lhs, Q::from(110));
        assert_eq!(w.rhs, Q::from(110));
        assert_eq!(r.exponents, (Q::from(40), Q::from(4), Q::from(16)));
    }

    #[test]
    fn genus_zero_rows() {
        let row = &table1()[3];
        let r = thm91_consistency(row, 1).unwrap();
        assert_eq!(r.g, 0);
        assert!(r.checks[1].vacuous);
        assert_eq!(r.exponents.0, Q::from(4));
        assert!(r.passed());
    }

    #[test]
    fn wrong_weight_is_caught() {
        let row = &table1()[15];
        let mut lift = LiftData::closed_form(&row.lattice().unwrap()).unwrap();
        lift.weight += Q::from(1);
        assert!(!thm91_check(row, &lift, 1).unwrap().passed());
    }

    #[test]
    fn series_data_matches_closed_form() {
        for row in table1().iter().filter(|r| r.lattice().unwrap().rank() <= 6) {
            let lat = row.lattice().unwrap();
            let f = construct_f(&lat, q(1, 1)).unwrap();
            let s = LiftData::from_series(&f).unwrap();
            assert_eq!(s, LiftData::closed_form(&lat).unwrap(), "{}", row.perp);
            assert!(thm91_check(row, &s, 1).unwrap().passed());
        }
    }

    #[test]
    fn rank_thirteen_variant() {
        let r = thm93_consistency(1).unwrap();
        assert_eq!(r.weight, Q::from(15));
        assert_eq!(r.psi_divisor, (Q::from(2), Q::from(10), Q::from(-16)));
        assert!(r.passed(), "{r:?}");
        assert!(thm93_consistency(3).unwrap().passed());
    }

    #[test]
    fn obstruction_for_the_four_types() {
        let want_g = [6, 5, 4, 3];
        for (e, g) in prop92_rows().iter().zip(want_g) {
            let t = e.eval().unwrap().invariants().unwrap();
            let r = prop92_obstruction(&t, 12).unwrap();
            assert_eq!(r.g, g);
            assert_eq!(r.psi_divisor.0, Affine { c: pow2(g), a: Q::from(2) * (pow2(g) - 1) });
            assert_eq!(r.phi_divisor.0.c, pow2(g - 1) * (pow2(2 * g) + 1));
            assert_eq!(r.phi_weight.0, r.phi_weight.1);
            assert_eq!(r.min_scanned, pow2(g));
            assert!(r.obstructs());
        }
    }

    #[test]
    fn exceptional_type_rejected() {
        let t = LatticeExpr::parse("U(2)+E8(2)").unwrap().eval().unwrap().invariants().unwrap();
        assert!(prop92_obstruction(&t, 3).is_err());
        let t = LatticeExpr::parse("U+E8(2)").unwrap().eval().unwrap().invariants().unwrap();
        assert!(prop92_obstruction(&t, 3).is_err());
        assert!(prop92_obstruction(&LatticeTriple::new(11, 1, 1).unwrap(), 3).is_err());
    }

    fn wall_point(eps: f64) -> TubePoint {
        let l = LatticeExpr::parse("U+E8(2)").unwrap().eval().unwrap();
        let mut y = vec![0.0; 10];
        y[0] = 3.0;
        y[1] = 3.0 + eps;
        TubePoint::new(2, &l, vec![0.0; 10], y).unwrap()
    }

    #[test]
    fn rhs_vanishes_on_the_wall() {
        let f = construct_f(&LatticeExpr::parse("U(2)+U+E8(2)").unwrap().eval().unwrap(), q(3, 1)).unwrap();
        let sigma = SiegelPoint::from_c64(&[vec![(0.1, 1.1)]], 64).unwrap();
        let pts: Vec<(f64, f64)> = [1e-3, 1e-4, 1e-5]
            .iter()
            .map(|&e| (libm::log(e), rhs_invariant(&f, &wall_point(e), &sigma, None, 4.0, 1, 64).unwrap().log_value))
            .collect();
        // ‖Ψ‖^{2^g} with g = 1 and a simple zero: order 2.
        for w in pts.windows(2) {
            let slope = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
            assert!((slope - 2.0).abs() < 0.05, "{slope}");
        }
        let empty = SiegelPoint::empty();
        let v = rhs_invariant(&f, &wall_point(1e-3), &empty, None, 4.0, 1, 64).unwrap();
        assert_eq!(v.log_chi8_norm2, 0.0);
        assert!((v.log_value - 0.5 * v.log_psi_norm2).abs() < 1e-12);
    }
}
