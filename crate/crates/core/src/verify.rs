//! Self-checks grouped into suites, for front ends that want a pass/fail
//! summary without a test harness.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::arith::qseries::int_coeff;
use crate::arith::{q, Cyc8, Mp, MpC, Q, QSeries};
use crate::borcherds::{
    borcherds_divisor, construct_f, lift_oracle, product_eval, restrict, TubePoint, WeightReport,
};
use crate::error::{Error, Result};
use crate::k3graph::{prop92_obstruction, prop92_rows, table1, table1_graph, thm91_consistency, thm93_consistency};
use crate::lattice::{Lattice, LatticeExpr};
use crate::modular::{self, analytic};
use crate::siegel::{
    default_grid, even_characteristics, fay_family, log_chi_g8_petersson_mp, split_family, theta_constants,
    vanishing_order_fit, SiegelPoint,
};
use crate::weil::{Letter, Mp2, WeilMatrix, WeilRep};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Series,
    Weil,
    Borcherds,
    Siegel,
    Graph,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["series", "weil", "borcherds", "siegel", "graph", "all"];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Series => "series",
            Suite::Weil => "weil",
            Suite::Borcherds => "borcherds",
            Suite::Siegel => "siegel",
            Suite::Graph => "graph",
            Suite::All => "all",
        }
    }
}

impl core::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Ok(match s {
            "series" => Suite::Series,
            "weil" => Suite::Weil,
            "borcherds" => Suite::Borcherds,
            "siegel" => Suite::Siegel,
            "graph" => Suite::Graph,
            "all" => Suite::All,
            _ => return Err(Error::OutOfRange(format!("unknown suite {s:?}; expected one of {:?}", Suite::NAMES))),
        })
    }
}

/// Result of one named check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type CheckFn = fn() -> Result<String>;

fn run_one(suite: &'static str, name: &'static str, f: CheckFn) -> Outcome {
    match f() {
        Ok(detail) => Outcome { suite, name, passed: true, detail },
        Err(e) => Outcome { suite, name, passed: false, detail: e.to_string() },
    }
}

fn checks(s: Suite) -> Vec<(&'static str, CheckFn)> {
    match s {
        Suite::Series => vec![
            ("quarter sums rebuild f0", series_quarter_sums as CheckFn),
            ("restriction to L", series_restriction),
            ("U+U+E8 is E4^2/eta^24", series_e8),
            ("support and symmetry", series_support),
        ],
        Suite::Weil => vec![("unitarity and relations", weil_relations as CheckFn), ("closed forms", weil_closed_forms), ("slash identities", weil_slash)],
        Suite::Borcherds => vec![
            ("weight table", borcherds_weights as CheckFn),
            ("coset sum equals series", borcherds_lift),
            ("divisor ledger", borcherds_divisors),
            ("wall vanishing", borcherds_wall),
        ],
        Suite::Siegel => vec![("vanishing orders", siegel_slopes as CheckFn), ("theta-null and invariance", siegel_invariance)],
        Suite::Graph => vec![("table and graph", graph_structure as CheckFn), ("factorization bookkeeping", graph_bookkeeping)],
        Suite::All => Vec::new(),
    }
}

/// Runs a suite; `All` runs every suite in order.
pub fn run(s: Suite) -> Vec<Outcome> {
    let suites: &[Suite] = if s == Suite::All { &[Suite::Series, Suite::Weil, Suite::Borcherds, Suite::Siegel, Suite::Graph] } else { &[s] };
    suites.iter().flat_map(|&s| checks(s).into_iter().map(move |(n, f)| run_one(s.name(), n, f))).collect()
}

fn lat(s: &str) -> Result<Lattice> {
    LatticeExpr::parse(s)?.eval()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Inconsistent(msg()))
    }
}

fn series_quarter_sums() -> Result<String> {
    let o = q(5, 1);
    for k in -4..=12 {
        let sum = (0..4).fold(QSeries::zero(Some(o)), |acc, i| acc.add(&modular::g_i(k, i, o)));
        ensure(sum.eq_common(&modular::f0(k, o * Q::from(4)).scale_exponents(q(1, 4))), || format!("k = {k}"))?;
    }
    Ok("k = -4..12".into())
}

fn series_restriction() -> Result<String> {
    let o = q(10, 1);
    let mut n_checked = 0;
    for (s, ns) in [("A1plus", &[1, 2][..]), ("A1plus+A1", &[1, 2]), ("A1plus^2+A1", &[1])] {
        let l = lat(s)?;
        let fl = construct_f(&l, o)?;
        for &n in ns {
            let big = lat(&format!("U({n})"))?.direct_sum(&l);
            let r = restrict(&construct_f(&big, o)?, n, &l)?;
            ensure(r.eq_below(&fl, o), || format!("{s}, N = {n}"))?;
            n_checked += 1;
        }
    }
    Ok(format!("{n_checked} pairs to order 10"))
}

fn series_e8() -> Result<String> {
    let o = q(10, 1);
    let f = construct_f(&lat("U+U+E8")?, o)?;
    let e4 = modular::e4(o + Q::from(1));
    let want = e4.mul(&e4).mul(&modular::eta_power(1, -24, o + Q::from(1)));
    ensure(f.len() == 1 && f.component(0).eq_below(&want, o), || "coefficients differ".into())?;
    Ok(format!("c(-1..2) = {:?}", (-1..3).map(|n| int_coeff(f.component(0), Q::from(n))).collect::<Vec<_>>()))
}

fn series_support() -> Result<String> {
    for s in ["U+A1plus", "A1plus^2+A1^3", "U+U(2)+D4", "U+U+E8(2)+A1"] {
        let f = construct_f(&lat(s)?, q(3, 1))?;
        ensure(f.check_support() && f.check_symmetry() && f.is_integral(), || s.to_string())?;
    }
    Ok("4 lattices".into())
}

fn weil_relations() -> Result<String> {
    for s in ["A1plus+A1", "U+A1plus", "U(2)+D4+A1", "A1^3", "U+U+E8(2)"] {
        let r = WeilRep::new(&lat(s)?)?;
        let (sm, tm) = (r.generator(Letter::S)?, r.generator(Letter::T)?);
        ensure(sm.is_unitary() && tm.is_unitary(), || format!("{s}: not unitary"))?;
        let z = r.matrix(&Mp2::z())?;
        let scalar = WeilMatrix { n: z.n, entries: WeilMatrix::identity(z.n).entries.iter().map(|x| x * &r.z_scalar()).collect() };
        ensure(z == scalar && sm.mul(&sm) == z, || format!("{s}: S² ≠ Z"))?;
        let st = sm.mul(&tm);
        ensure(st.mul(&st).mul(&st) == z, || format!("{s}: (ST)³ ≠ Z"))?;
    }
    Ok("5 lattices".into())
}

fn weil_closed_forms() -> Result<String> {
    for s in ["A1plus+A1", "U+A1plus", "U+U(2)", "U(2)+D4+A1", "A1plus^2+A1^3", "U+U(2)+E8(2)"] {
        let r = WeilRep::new(&lat(s)?)?;
        let e0 = r.basis(0);
        for l in 0..4 {
            let g = Mp2::S.mul(&Mp2::t_pow(l)).inverse();
            ensure(r.apply(&g, &e0) == r.closed_form_st_inv(l), || format!("{s}, l = {l}"))?;
        }
        ensure(r.apply(&Mp2::v().inverse(), &e0) == r.closed_form_v_inv(), || format!("{s}, V"))?;
    }
    Ok("6 lattices".into())
}

fn weil_slash() -> Result<String> {
    let mut mp = Mp::new(128);
    let mut worst: f64 = 0.0;
    for (x, y) in [(0.2, 1.1), (-0.35, 1.0), (0.05, 1.7)] {
        let tau = mp.c(x, y);
        for k in -4..=12 {
            let c = (&Cyc8::sqrt2_pow(8 - k) * &Cyc8::zeta_pow(-k)).embed(&mut mp);
            for l in 0..4 {
                let lhs = analytic::f0_slash_st(k, l, &tau, &mut mp)?;
                let arg = (&tau + &mp.cint(l)).scale(&mp.ratio(1, 4));
                let rhs = &c * &analytic::f0(k, &arg, &mut mp)?;
                worst = worst.max(lhs.dist(&rhs) / (1.0 + rhs.abs_f64()));
            }
            let lhs = analytic::f0_slash_v(k, &tau, &mut mp)?;
            let rhs = analytic::f1(k, &tau, &mut mp)?;
            worst = worst.max(lhs.dist(&rhs) / (1.0 + rhs.abs_f64()));
        }
    }
    ensure(worst < 1e-20, || format!("max relative error {worst:e}"))?;
    Ok(format!("max relative error {worst:.1e}"))
}

/// Lattices for the weight table: every complement in the table plus the
/// named examples.
pub fn weight_table_lattices() -> Vec<String> {
    let mut v: Vec<String> = table1().iter().map(|r| r.perp.to_string()).collect();
    for k in 0..=8 {
        v.push(if k == 0 { "U(2)+A1plus".into() } else { format!("U(2)+A1plus+A1^{k}") });
    }
    for s in ["U(2)+U(2)+E8(2)", "U+U(2)+E8(2)", "U+U+E8(2)", "U+U(2)+D4^2", "U+U+E8", "U+U+D4"] {
        v.push(s.into());
    }
    v
}

/// Named weights: `(lattice, weight)`.
pub const WEIGHT_SPOTS: [(&str, i64); 7] =
    [("U+U(2)+E8(2)", 4), ("U+U+E8(2)", 12), ("U(2)+U(2)+E8(2)", 0), ("U+U(2)+D4^2", 28), ("U+U+E8", 252), ("U+U+D4", 72), ("U^2+E8(2)+A1", 15)];

fn borcherds_weights() -> Result<String> {
    let list = weight_table_lattices();
    for s in &list {
        let rep = WeightReport::new(&construct_f(&lat(s)?, q(1, 1))?)?;
        ensure(rep.agrees(), || format!("{s}: {rep:?}"))?;
    }
    for (s, w) in WEIGHT_SPOTS {
        let rep = WeightReport::new(&construct_f(&lat(s)?, q(1, 1))?)?;
        ensure(rep.from_series == num_rational::BigRational::from_integer(w.into()), || format!("{s}: {}", rep.from_series))?;
    }
    Ok(format!("{} lattices, {} spot values", list.len(), WEIGHT_SPOTS.len()))
}

fn borcherds_lift() -> Result<String> {
    let mut mp = Mp::new(128);
    let mut worst: f64 = 0.0;
    for s in ["U+A1plus", "U+U(2)", "A1plus^2+A1", "U+U(2)+E8(2)"] {
        let f = construct_f(&lat(s)?, q(40, 1))?;
        for (x, y) in [(0.1, 1.0), (-0.3, 1.2), (0.45, 2.0)] {
            let tau = mp.c(x, y);
            let (vals, _) = f.eval(&tau, &mut mp)?;
            let lift = lift_oracle(f.rep(), &tau, &mut mp)?;
            worst = vals.iter().zip(&lift).map(|(a, b)| a.dist(b)).fold(worst, f64::max);
        }
    }
    ensure(worst < 1e-20, || format!("max error {worst:e}"))?;
    Ok(format!("max error {worst:.1e}"))
}

fn borcherds_divisors() -> Result<String> {
    for s in ["U+U(2)+E8(2)", "U+A1plus+A1^3", "A1plus^2+A1^5"] {
        let l = lat(s)?;
        let t = l.invariants()?;
        let f = construct_f(&l, q(1, 1))?;
        let d = borcherds_divisor(&f)?.ledger(f.rep());
        ensure(d.is_standard(t.r, t.l), || format!("{s}: {d}"))?;
    }
    let f = construct_f(&lat("U^2+E8(2)+A1")?, q(1, 1))?;
    let d = borcherds_divisor(&f)?.ledger(f.rep());
    let one = f.rep().characteristic_index();
    let ok = d.d_prime == num_bigint::BigInt::from(1)
        && d.d_double_prime == Some(5.into())
        && d.extras == [(one, q(-1, 4), num_bigint::BigInt::from(-8))];
    ensure(ok, || format!("U^2+E8(2)+A1: {d}"))?;
    Ok(format!("U^2+E8(2)+A1: {d}"))
}

/// Slopes of `log|Ψ|` against `log ε` for the approach `y = (3, 3+ε, 0, …)` to
/// a simple wall of `U ⊕ U(2) ⊕ E8(2)`, split as `U(2) ⊕ (U ⊕ E8(2))`.
pub fn wall_slopes() -> Result<Vec<f64>> {
    let l = lat("U+E8(2)")?;
    let f = construct_f(&lat("U(2)+U+E8(2)")?, q(3, 1))?;
    let mut pts = Vec::new();
    for e in [1e-2, 1e-3, 1e-4, 1e-5] {
        let mut y = vec![0.0; 10];
        y[0] = 3.0;
        y[1] = 3.0 + e;
        let p = TubePoint::new(2, &l, vec![0.0; 10], y)?;
        pts.push((libm::log(e), product_eval(&f, &p, None, 4.0)?.log_abs));
    }
    Ok(pts.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect())
}

fn borcherds_wall() -> Result<String> {
    let s = wall_slopes()?;
    ensure(s.iter().all(|x| (x - 1.0).abs() <= 0.1), || format!("slopes {s:?}"))?;
    Ok(format!("slopes {s:.4?}"))
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Fitted vanishing orders for the genus-one Fay family, the irreducible
/// genus-two family and the split genus-two family, at 64 bits.
pub fn siegel_fits() -> Result<[f64; 3]> {
    let grid = default_grid();
    let rows = |mp: &Mp, r: &[&[(f64, f64)]]| -> Vec<Vec<MpC>> { r.iter().map(|x| x.iter().map(|&(a, b)| mp.c(a, b)).collect()).collect() };
    let fay1 = |t: Complex64, mp: &mut Mp| {
        let p = rows(mp, &[&[(0.3, 0.0)]]);
        fay_family(&p, t, mp)
    };
    let fay2 = |t: Complex64, mp: &mut Mp| {
        let p = rows(mp, &[&[(0.3, 0.0), (0.27, 0.11)], &[(0.27, 0.11), (-0.1, 0.95)]]);
        fay_family(&p, t, mp)
    };
    let split = |t: Complex64, mp: &mut Mp| {
        let a = SiegelPoint::from_c64(&[vec![(0.1, 1.1)]], 64)?;
        let b = SiegelPoint::from_c64(&[vec![(-0.25, 0.9)]], 64)?;
        split_family(&a, &b, &[vec![c(0.7, 0.2)]], t, mp)
    };
    Ok([
        vanishing_order_fit(&fay1, &grid, 64)?.slope,
        vanishing_order_fit(&fay2, &grid, 64)?.slope,
        vanishing_order_fit(&split, &grid, 64)?.slope,
    ])
}

fn siegel_slopes() -> Result<String> {
    let s = siegel_fits()?;
    ensure(s.iter().zip([1.0, 4.0, 8.0]).all(|(a, b)| (a - b).abs() <= 0.05), || format!("slopes {s:?}"))?;
    Ok(format!("slopes {s:.3?}"))
}

/// Largest relative change of `‖χ_g⁸‖` under `Σ ↦ Σ + B` and `Σ ↦ AᵀΣA` over
/// fixed test points of genus 1, 2 and 3.
pub fn chi_invariance_error(prec: usize) -> Result<f64> {
    let mut mp = Mp::new(prec);
    let pts: [(&[&[(f64, f64)]], &[&[i64]], &[&[i64]]); 3] = [
        (&[&[(0.13, 1.05)]], &[&[3]], &[&[-1]]),
        (&[&[(0.13, 1.05), (0.21, 0.32)], &[(0.21, 0.32), (-0.37, 0.94)]], &[&[1, -2], &[-2, 3]], &[&[2, 1], &[1, 1]]),
        (
            &[&[(0.1, 1.2), (0.05, 0.3), (-0.2, 0.1)], &[(0.05, 0.3), (0.3, 1.0), (0.1, 0.2)], &[(-0.2, 0.1), (0.1, 0.2), (-0.15, 1.1)]],
            &[&[1, 0, 1], &[0, -1, 2], &[1, 2, 0]],
            &[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]],
        ),
    ];
    let mut worst: f64 = 0.0;
    for (s, b, a) in pts {
        let rows: Vec<Vec<(f64, f64)>> = s.iter().map(|r| r.to_vec()).collect();
        let p = SiegelPoint::from_c64(&rows, prec)?;
        let b: Vec<Vec<i64>> = b.iter().map(|r| r.to_vec()).collect();
        let a: Vec<Vec<i64>> = a.iter().map(|r| r.to_vec()).collect();
        let base = log_chi_g8_petersson_mp(&p, &mut mp)?;
        for q in [p.add_integer(&b)?, p.transform(&a, &mp)?] {
            let v = log_chi_g8_petersson_mp(&q, &mut mp)?;
            // Relative change of the norm itself; the difference of logs is
            // taken at full precision so it is not lost to f64 rounding.
            let d = crate::arith::mp::to_f64(&v.sub(&base, prec, crate::arith::mp::RM));
            worst = worst.max(libm::expm1(d).abs());
        }
    }
    Ok(worst)
}

fn siegel_invariance() -> Result<String> {
    let mp = Mp::new(128);
    let d = SiegelPoint::from_c64(&[vec![(0.1, 1.1)]], 128)?.block_diag(&SiegelPoint::from_c64(&[vec![(-0.3, 0.8)]], 128)?, &mp);
    let vals = theta_constants(&even_characteristics(2), &d, 128)?;
    let zeros: Vec<String> = vals.iter().filter(|t| t.is_numerical_zero()).map(|t| t.ch.to_string()).collect();
    ensure(zeros.len() == 1, || format!("vanishing thetas on a block-diagonal point: {zeros:?}"))?;
    let worst = chi_invariance_error(128)?;
    ensure(worst < 1e-12, || format!("relative change {worst:e}"))?;
    Ok(format!("θ{} vanishes; relative change {worst:.1e}", zeros[0]))
}

fn graph_structure() -> Result<String> {
    let rows = table1();
    for r in &rows {
        r.validate()?;
    }
    let g = table1_graph(None)?;
    g.check()?;
    Ok(format!("{} rows; graph with {} vertices, {} edges", rows.len(), g.vertices.len(), g.edges.len()))
}

fn graph_bookkeeping() -> Result<String> {
    for r in table1() {
        for ell in [1, 2, 3] {
            let rep = thm91_consistency(&r, ell)?;
            ensure(rep.passed(), || format!("{}: {rep:?}", r.perp))?;
        }
    }
    let t = thm93_consistency(1)?;
    ensure(t.passed(), || format!("{t:?}"))?;
    for e in prop92_rows() {
        let m = e.eval()?.invariants()?;
        ensure(prop92_obstruction(&m, 16)?.obstructs(), || format!("{e}"))?;
    }
    Ok("43 rows, rank-13 variant, 4 obstruction rows".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_names() {
        for n in Suite::NAMES {
            assert_eq!(n.parse::<Suite>().unwrap().name(), n);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn cheap_suites_pass() {
        for s in [Suite::Series, Suite::Weil, Suite::Graph] {
            for o in run(s) {
                assert!(o.passed, "{o:?}");
            }
        }
    }
}
