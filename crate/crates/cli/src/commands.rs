use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use twoelem::arith::{q, Q};
use twoelem::borcherds::{borcherds_divisor, construct_f, WeightReport};
use twoelem::k3graph::table1_graph;
use twoelem::lattice::{Lattice, LatticeExpr};
use twoelem::siegel::{chi_g, even_characteristics, log_chi_g8_petersson, theta_constants, SiegelPoint};
use twoelem::verify::{self, Suite};
use twoelem::weil::WeilRep;
use twoelem::Error;

use crate::graph_io::{self, GraphDoc};
use crate::Format;

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

/// Parses and evaluates a lattice expression; parse errors point at the
/// offending character.
fn lattice(expr: &str) -> Result<(LatticeExpr, Lattice)> {
    let e = match LatticeExpr::parse(expr) {
        Ok(e) => e,
        Err(Error::Parse { pos, msg }) => {
            bail!("cannot parse lattice expression at column {}: {msg}\n  {expr}\n  {}^", pos + 1, " ".repeat(pos))
        }
        Err(e) => return Err(e.into()),
    };
    let l = e.eval().with_context(|| format!("evaluating {e}"))?;
    Ok((e, l))
}

fn qs(x: Q) -> String {
    x.to_string()
}

#[derive(Serialize)]
struct LatticeInfo {
    expr: String,
    rank: usize,
    r: i64,
    l: i64,
    delta: u8,
    sigma: i64,
    signature: [usize; 2],
    /// Canonical representative of `1_Λ` in lattice coordinates.
    characteristic: Vec<String>,
    characteristic_q: String,
    g: Option<i64>,
    k: Option<i64>,
}

pub fn lattice_info(expr: &str, format: Format) -> Result<String> {
    let (e, l) = lattice(expr)?;
    let t = l.invariants()?;
    let d = l.discriminant_group();
    let one = d.characteristic()?;
    let (bp, bm) = l.signature();
    let info = LatticeInfo {
        expr: e.to_string(),
        rank: l.rank(),
        r: t.r,
        l: t.l,
        delta: t.delta,
        sigma: l.sigma(),
        signature: [bp, bm],
        characteristic: d.vector(&one).into_iter().map(qs).collect(),
        characteristic_q: qs(d.q(&one)),
        g: t.genus_g().ok(),
        k: t.genus_k().ok(),
    };
    if format == Format::Json {
        return json(&info);
    }
    let opt = |x: Option<i64>| x.map_or("undefined".to_string(), |v| v.to_string());
    let mut s = String::new();
    writeln!(s, "lattice    {}", info.expr)?;
    writeln!(s, "(r, l, δ)  {t}")?;
    writeln!(s, "signature  ({bp}, {bm}), σ = {}", info.sigma)?;
    writeln!(s, "1_Λ        ({}), q = {}", info.characteristic.join(", "), info.characteristic_q)?;
    writeln!(s, "g          {}", opt(info.g))?;
    writeln!(s, "k          {}", opt(info.k))?;
    Ok(s)
}

#[derive(Serialize)]
struct CheckDoc {
    suite: &'static str,
    name: &'static str,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
struct VerifyDoc {
    suite: String,
    passed: bool,
    total: usize,
    failed: usize,
    checks: Vec<CheckDoc>,
}

/// Returns the rendered summary and whether every check passed.
pub fn verify(suite: &str, format: Format) -> Result<(String, bool)> {
    let s: Suite = suite.parse()?;
    let outcomes = verify::run(s);
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let doc = VerifyDoc {
        suite: s.name().into(),
        passed: failed == 0,
        total: outcomes.len(),
        failed,
        checks: outcomes.into_iter().map(|o| CheckDoc { suite: o.suite, name: o.name, passed: o.passed, detail: o.detail }).collect(),
    };
    let text = if format == Format::Json {
        json(&doc)?
    } else {
        let mut s = String::new();
        for c in &doc.checks {
            writeln!(s, "{} {}/{}: {}", if c.passed { "PASS" } else { "FAIL" }, c.suite, c.name, c.detail)?;
        }
        writeln!(s, "{} of {} checks passed", doc.total - doc.failed, doc.total)?;
        s
    };
    Ok((text, doc.passed))
}

fn render_graph(g: &twoelem::k3graph::K3Graph, format: Format) -> Result<String> {
    match format {
        Format::Dot => Ok(g.to_dot()),
        Format::Json => json(&graph_io::export(g)?),
        Format::Text => {
            let mut s = String::new();
            for v in g.vertices.values() {
                let label = v.perp_label.as_deref().unwrap_or("-");
                writeln!(s, "{} g={} k={} perp={label}{}", v.triple, v.g, v.k, if v.verified { "" } else { " (unverified)" })?;
            }
            for e in &g.edges {
                writeln!(s, "{} -> {} {}", e.source, e.target, e.kind.name())?;
            }
            Ok(s)
        }
    }
}

pub fn export_graph(depth: Option<usize>, format: Format) -> Result<String> {
    render_graph(&table1_graph(depth)?, format)
}

pub fn import_graph(path: &Path, format: Format) -> Result<String> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc: GraphDoc = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let g = graph_io::import(&doc)?;
    render_graph(&g, format)
}

#[derive(Serialize)]
struct ComponentDoc {
    index: usize,
    element: Vec<i64>,
    q: String,
    /// `[exponent, coefficient]` pairs in increasing exponent order.
    terms: Vec<[String; 2]>,
}

#[derive(Serialize)]
struct SeriesDoc {
    lattice: String,
    weight: String,
    order: String,
    components: Vec<ComponentDoc>,
}

pub fn qseries(expr: &str, order: Q, format: Format) -> Result<String> {
    let (e, l) = lattice(expr)?;
    let f = construct_f(&l, order)?;
    let d = f.rep().disc();
    let components = (0..f.len())
        .map(|i| {
            let el = d.element(i);
            ComponentDoc {
                index: i,
                q: qs(d.q(&el)),
                element: el.coords,
                terms: f.component(i).iter().map(|(n, c)| [qs(n), c.to_string()]).collect(),
            }
        })
        .collect();
    let doc = SeriesDoc { lattice: e.to_string(), weight: qs(f.weight()), order: qs(order), components };
    if format == Format::Json {
        return json(&doc);
    }
    let mut s = String::new();
    writeln!(s, "F for {} of weight {}, exponents below {}", doc.lattice, doc.weight, doc.order)?;
    for c in &doc.components {
        writeln!(s, "e_{} {:?} q = {}", c.index, c.element, c.q)?;
        for [n, a] in &c.terms {
            writeln!(s, "  q^{n}: {a}")?;
        }
    }
    Ok(s)
}

#[derive(Serialize)]
struct HeegnerDoc {
    index: usize,
    element: Vec<i64>,
    /// `λ²/2`.
    n: String,
    multiplicity: String,
}

#[derive(Serialize)]
struct BorcherdsDoc {
    lattice: String,
    weight: String,
    weight_closed_form: Option<i64>,
    divisor: String,
    d_prime: String,
    d_double_prime: Option<String>,
    terms: Vec<HeegnerDoc>,
}

pub fn borcherds_report(expr: &str, format: Format) -> Result<String> {
    let (e, l) = lattice(expr)?;
    // The principal part and constant term only need exponents below 1.
    let f = construct_f(&l, q(1, 1))?;
    let w = WeightReport::new(&f)?;
    let h = borcherds_divisor(&f)?;
    let rep: &WeilRep = f.rep();
    let ledger = h.ledger(rep);
    let d = rep.disc();
    let doc = BorcherdsDoc {
        lattice: e.to_string(),
        weight: w.from_series.to_string(),
        weight_closed_form: w.closed_form,
        divisor: ledger.to_string(),
        d_prime: ledger.d_prime.to_string(),
        d_double_prime: ledger.d_double_prime.as_ref().map(|x| x.to_string()),
        terms: h
            .terms
            .iter()
            .map(|(&(i, n), c)| HeegnerDoc { index: i, element: d.element(i).coords, n: qs(n), multiplicity: c.to_string() })
            .collect(),
    };
    if format == Format::Json {
        return json(&doc);
    }
    let mut s = String::new();
    writeln!(s, "lattice   {}", doc.lattice)?;
    let closed = doc.weight_closed_form.map_or("n/a".to_string(), |w| w.to_string());
    writeln!(s, "weight    {} (closed form {closed})", doc.weight)?;
    writeln!(s, "divisor   {}", doc.divisor)?;
    for t in &doc.terms {
        writeln!(s, "  H(e_{} {:?}, n = {}) × {}", t.index, t.element, t.n, t.multiplicity)?;
    }
    Ok(s)
}

#[derive(Serialize)]
struct ThetaDoc {
    characteristic: String,
    value: [f64; 2],
    vanishes: bool,
}

#[derive(Serialize)]
struct SiegelDoc {
    g: usize,
    prec: usize,
    chi: [f64; 2],
    /// `ln((det Im Σ)^w |χ_g⁸|²)`; absent when a theta constant vanishes.
    log_chi8_petersson: Option<f64>,
    thetas: Vec<ThetaDoc>,
}

pub fn siegel_eval(sigma: &str, prec: usize, format: Format) -> Result<String> {
    let rows: Vec<Vec<[f64; 2]>> = serde_json::from_str(sigma).context("Σ must be JSON rows of [re, im] pairs")?;
    let rows: Vec<Vec<(f64, f64)>> = rows.into_iter().map(|r| r.into_iter().map(|[a, b]| (a, b)).collect()).collect();
    let p = SiegelPoint::from_c64(&rows, prec)?;
    let vals = theta_constants(&even_characteristics(p.g()), &p, prec)?;
    let (re, im) = chi_g(&p, prec)?.to_c64();
    let doc = SiegelDoc {
        g: p.g(),
        prec,
        chi: [re, im],
        log_chi8_petersson: log_chi_g8_petersson(&p, prec).ok(),
        thetas: vals
            .iter()
            .map(|t| {
                let (a, b) = t.value.to_c64();
                ThetaDoc { characteristic: t.ch.to_string(), value: [a, b], vanishes: t.is_numerical_zero() }
            })
            .collect(),
    };
    if format == Format::Json {
        return json(&doc);
    }
    let mut s = String::new();
    writeln!(s, "g = {}, {} bits", doc.g, doc.prec)?;
    writeln!(s, "chi_g = {:e} {:+e}i", re, im)?;
    match doc.log_chi8_petersson {
        Some(v) => writeln!(s, "ln ||chi_g^8|| = {v}")?,
        None => writeln!(s, "ln ||chi_g^8|| = -inf (a theta constant vanishes)")?,
    }
    for t in &doc.thetas {
        writeln!(s, "theta{} = {:e} {:+e}i{}", t.characteristic, t.value[0], t.value[1], if t.vanishes { " (zero)" } else { "" })?;
    }
    Ok(s)
}
