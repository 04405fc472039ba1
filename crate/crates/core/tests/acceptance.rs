//! End-to-end acceptance checks. Each criterion prints one `PASS` or `FAIL`
//! line; the process exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;

use twoelem::arith::{q, Cyc8, Mp, Q};
use twoelem::borcherds::{borcherds_divisor, construct_f, lift_oracle, restrict, HeegnerSum, WeightReport};
use twoelem::k3graph::{build_graph, table1, thm91_consistency, thm93_consistency};
use twoelem::lattice::{Lattice, LatticeExpr};
use twoelem::modular::{self, analytic};
use twoelem::siegel::{chi_g, even_characteristics, theta_constants, SiegelPoint};
use twoelem::verify;
use twoelem::weil::{Mp2, WeilRep};

type Outcome = Result<String, String>;

fn lat(s: &str) -> Result<Lattice, String> {
    LatticeExpr::parse(s).and_then(|e| e.eval()).map_err(|e| format!("{s}: {e}"))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.1?}, limit {limit:?}"))
}

fn weight_table() -> Outcome {
    let start = Instant::now();
    let mut names: Vec<String> = table1().iter().map(|r| r.perp.to_string()).collect();
    names.push("U(2)+A1plus".into());
    names.extend((1..=8).map(|k| format!("U(2)+A1plus+A1^{k}")));
    names.extend(["U(2)+U(2)+E8(2)", "U+U(2)+E8(2)", "U+U+E8(2)", "U+U(2)+D4^2", "U+U+E8", "U+U+D4"].map(String::from));
    let mut with_closed_form = 0;
    for s in &names {
        let rep = WeightReport::new(&construct_f(&lat(s)?, q(1, 1)).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(rep.agrees(), || format!("{s}: {rep:?}"))?;
        with_closed_form += usize::from(rep.closed_form.is_some());
    }
    let spots = [
        ("U+U(2)+E8(2)", 4),
        ("U+U+E8(2)", 12),
        ("U(2)+U(2)+E8(2)", 0),
        ("U+U(2)+D4+D4", 28),
        ("U+U+E8", 252),
        ("U+U+D4", 72),
        ("U+U+E8(2)+A1", 15),
    ];
    for (s, w) in spots {
        let rep = WeightReport::new(&construct_f(&lat(s)?, q(1, 1)).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(rep.from_series == BigRational::from_integer(w.into()), || format!("{s}: weight {} instead of {w}", rep.from_series))?;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{} lattices ({with_closed_form} against the closed form), 7 spot values, {:.1?}", names.len(), start.elapsed()))
}

fn coset_sum() -> Outcome {
    let start = Instant::now();
    let mut mp = Mp::new(128);
    let mut worst: f64 = 0.0;
    for s in ["U+A1plus", "U+U(2)", "A1plus^2+A1", "U+U(2)+E8(2)"] {
        let f = construct_f(&lat(s)?, q(40, 1)).map_err(|e| e.to_string())?;
        for (x, y) in [(0.1, 1.0), (-0.3, 1.2), (0.45, 2.0)] {
            let tau = mp.c(x, y);
            let (vals, _) = f.eval(&tau, &mut mp).map_err(|e| e.to_string())?;
            let lift = lift_oracle(f.rep(), &tau, &mut mp).map_err(|e| e.to_string())?;
            ensure(vals.len() == lift.len(), || format!("{s}: component count"))?;
            worst = vals.iter().zip(&lift).map(|(a, b)| a.dist(b)).fold(worst, f64::max);
        }
    }
    ensure(worst < 1e-20, || format!("max componentwise error {worst:e}"))?;
    within(start, Duration::from_secs(120))?;
    Ok(format!("max componentwise error {worst:.1e}, {:.1?}", start.elapsed()))
}

fn weil_identities() -> Outcome {
    let mut mp = Mp::new(128);
    let mut worst: f64 = 0.0;
    for (x, y) in [(0.2, 1.1), (-0.35, 1.0), (0.05, 1.7)] {
        let tau = mp.c(x, y);
        for k in -4..=12 {
            let c = (&Cyc8::sqrt2_pow(8 - k) * &Cyc8::zeta_pow(-k)).embed(&mut mp);
            for l in 0..4 {
                let lhs = analytic::f0_slash_st(k, l, &tau, &mut mp).map_err(|e| e.to_string())?;
                let arg = (&tau + &mp.cint(l)).scale(&mp.ratio(1, 4));
                let rhs = &c * &analytic::f0(k, &arg, &mut mp).map_err(|e| e.to_string())?;
                worst = worst.max(lhs.dist(&rhs) / (1.0 + rhs.abs_f64()));
            }
            let lhs = analytic::f0_slash_v(k, &tau, &mut mp).map_err(|e| e.to_string())?;
            let rhs = analytic::f1(k, &tau, &mut mp).map_err(|e| e.to_string())?;
            worst = worst.max(lhs.dist(&rhs) / (1.0 + rhs.abs_f64()));
        }
    }
    ensure(worst < 1e-20, || format!("slash identities: max relative error {worst:e}"))?;
    let names = ["A1plus+A1", "U+A1plus", "U+U(2)", "U(2)+D4+A1", "A1plus^2+A1^3", "U+U+E8(2)"];
    for s in names {
        let r = WeilRep::new(&lat(s)?).map_err(|e| e.to_string())?;
        let first_column = |g: &Mp2| r.matrix_of_word(&g.word()).map(|m| m.column(0)).map_err(|e| e.to_string());
        for l in 0..4 {
            let g = Mp2::S.mul(&Mp2::t_pow(l)).inverse();
            ensure(first_column(&g)? == r.closed_form_st_inv(l), || format!("{s}: (S T^{l})^-1 column differs"))?;
        }
        ensure(first_column(&Mp2::v().inverse())? == r.closed_form_v_inv(), || format!("{s}: V^-1 column differs"))?;
    }
    Ok(format!("slash max relative error {worst:.1e}; closed forms exact on {} lattices", names.len()))
}

fn restriction() -> Outcome {
    let o = q(10, 1);
    let cases: [(&str, &[i64]); 4] = [("A1plus", &[1, 2]), ("A1plus+A1", &[1, 2]), ("A1plus^2+A1", &[1]), ("A1plus+A1^2", &[1, 2])];
    let mut n = 0;
    for (s, ns) in cases {
        let l = lat(s)?;
        let fl = construct_f(&l, o).map_err(|e| e.to_string())?;
        for &k in ns {
            let big = lat(&format!("U({k})"))?.direct_sum(&l);
            let r = restrict(&construct_f(&big, o).map_err(|e| e.to_string())?, k, &l).map_err(|e| e.to_string())?;
            ensure(r.eq_below(&fl, o), || format!("U({k})+{s} restricts wrongly"))?;
            n += 1;
        }
    }
    Ok(format!("{n} pairs agree to order 10"))
}

fn e8_example() -> Outcome {
    let o = q(10, 1);
    let f = construct_f(&lat("U+U+E8")?, o).map_err(|e| e.to_string())?;
    let e4 = modular::e4(o + Q::from(1));
    let want = e4.mul(&e4).mul(&modular::eta_power(1, -24, o + Q::from(1)));
    ensure(f.len() == 1, || format!("{} components", f.len()))?;
    ensure(f.component(0).eq_below(&want, o), || "coefficients differ from E4^2/eta^24".into())?;
    Ok("scalar form equals E4^2/eta^24 below q^10".into())
}

/// `H(0, −1) + 2^{(r−l)/2}·Σ H(γ, −1/4)` over `q(γ) ≡ −1/2`, with optional
/// corrections, built from the discriminant form alone.
fn expected_divisor(rep: &WeilRep, r: i64, l: i64, fix: &[(usize, i64)]) -> BTreeMap<(usize, Q), BigInt> {
    let mut m = BTreeMap::new();
    m.insert((0, Q::from(-1)), BigInt::from(1));
    for i in (0..rep.size()).filter(|&i| rep.q_class(i) == 3) {
        m.insert((i, q(-1, 4)), BigInt::from(1i64 << ((r - l) / 2)));
    }
    for &(i, c) in fix {
        *m.entry((i, q(-1, 4))).or_default() += c;
    }
    m.retain(|_, c| *c != BigInt::from(0));
    m
}

fn nonzero(h: &HeegnerSum) -> BTreeMap<(usize, Q), BigInt> {
    h.terms.iter().filter(|(_, c)| **c != BigInt::from(0)).map(|(k, c)| (*k, c.clone())).collect()
}

fn divisors() -> Outcome {
    let mut notes = Vec::new();
    for s in ["U+U(2)+E8(2)", "U+A1plus+A1^3", "A1plus^2+A1^5"] {
        let l = lat(s)?;
        let t = l.invariants().map_err(|e| e.to_string())?;
        let f = construct_f(&l, q(1, 1)).map_err(|e| e.to_string())?;
        let h = borcherds_divisor(&f).map_err(|e| e.to_string())?;
        let want = expected_divisor(f.rep(), t.r, t.l, &[]);
        ensure(nonzero(&h) == want, || format!("{s}: {:?} vs {want:?}", h.terms))?;
        ensure(h.ledger(f.rep()).is_standard(t.r, t.l), || format!("{s}: ledger not standard"))?;
        notes.push(format!("{s}: {}", h.ledger(f.rep())));
    }
    let f = construct_f(&lat("U+U+E8(2)+A1")?, q(1, 1)).map_err(|e| e.to_string())?;
    let h = borcherds_divisor(&f).map_err(|e| e.to_string())?;
    let one = f.rep().characteristic_index();
    let want = expected_divisor(f.rep(), 13, 9, &[(one, -8)]);
    ensure(nonzero(&h) == want, || format!("U^2+E8(2)+A1: {:?} vs {want:?}", h.terms))?;
    let d = h.ledger(f.rep());
    ensure(d.d_prime == BigInt::from(1) && d.d_double_prime == Some(BigInt::from(5)), || format!("U^2+E8(2)+A1: {d}"))?;
    notes.push(format!("U^2+E8(2)+A1: {d}"));
    Ok(notes.join("; "))
}

fn siegel_slopes() -> Outcome {
    let start = Instant::now();
    let s = verify::siegel_fits().map_err(|e| e.to_string())?;
    ensure(s.iter().zip([1.0, 4.0, 8.0]).all(|(a, b)| (a - b).abs() <= 0.05), || format!("slopes {s:?}"))?;
    within(start, Duration::from_secs(60))?;
    Ok(format!("slopes {:.3}, {:.3}, {:.3}, {:.1?}", s[0], s[1], s[2], start.elapsed()))
}

fn chi_vanishing() -> Outcome {
    let prec = 128;
    let mp = Mp::new(prec);
    let mut detail = Vec::new();
    for (a, b) in [((0.1, 1.1), (-0.3, 0.8)), ((0.45, 0.9), (0.2, 1.6))] {
        let pa = SiegelPoint::from_c64(&[vec![a]], prec).map_err(|e| e.to_string())?;
        let pb = SiegelPoint::from_c64(&[vec![b]], prec).map_err(|e| e.to_string())?;
        let d = pa.block_diag(&pb, &mp);
        let vals = theta_constants(&even_characteristics(2), &d, prec).map_err(|e| e.to_string())?;
        let zeros: Vec<_> = vals.iter().filter(|t| t.is_numerical_zero()).collect();
        ensure(zeros.len() == 1, || format!("{} vanishing theta constants", zeros.len()))?;
        let z = zeros[0];
        let others: f64 = vals.iter().filter(|t| t.ch != z.ch).map(|t| t.value.abs_f64()).product();
        let bound = (z.tail + z.abs_sum * (-(prec as f64) + 8.0).exp2()) * others * (1.0 + 1e-12);
        let chi = chi_g(&d, prec).map_err(|e| e.to_string())?.abs_f64();
        ensure(chi <= bound, || format!("|chi_2| = {chi:e} above bound {bound:e}"))?;
        detail.push(format!("|chi_2| = {chi:.1e} <= {bound:.1e}"));
    }
    let worst = verify::chi_invariance_error(128).map_err(|e| e.to_string())?;
    ensure(worst < 1e-12, || format!("relative change {worst:e}"))?;
    Ok(format!("{}; invariance relative change {worst:.1e}", detail.join(", ")))
}

fn graph() -> Outcome {
    let rows = table1();
    ensure(rows.len() == 43, || format!("{} rows", rows.len()))?;
    let mut seeds = Vec::new();
    for r in &rows {
        seeds.push(r.validate().map_err(|e| e.to_string())?.complement().map_err(|e| e.to_string())?);
    }
    let g = build_graph(&seeds, None).map_err(|e| e.to_string())?;
    g.check().map_err(|e| e.to_string())?;
    for r in &rows {
        for ell in 1..=3 {
            let rep = thm91_consistency(r, ell).map_err(|e| e.to_string())?;
            ensure(rep.passed(), || format!("{}: {rep:?}", r.perp))?;
        }
    }
    let t = thm93_consistency(1).map_err(|e| e.to_string())?;
    ensure(t.passed(), || format!("rank-13 row: {t:?}"))?;
    Ok(format!("43 rows; {} vertices, {} edges; bookkeeping exact", g.vertices.len(), g.edges.len()))
}

fn wall() -> Outcome {
    let s = verify::wall_slopes().map_err(|e| e.to_string())?;
    ensure(s.iter().all(|x| (x - 1.0).abs() <= 0.1), || format!("slopes {s:?}"))?;
    Ok(format!("slopes {s:.4?}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("weight table", weight_table),
        ("coset sum equals F", coset_sum),
        ("slash identities and closed forms", weil_identities),
        ("restriction", restriction),
        ("U+U+E8 series", e8_example),
        ("divisor ledger", divisors),
        ("Siegel slopes", siegel_slopes),
        ("chi vanishing and invariance", chi_vanishing),
        ("graph and bookkeeping", graph),
        ("wall vanishing", wall),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(d) => println!("PASS {:>2} {name}: {d}", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
