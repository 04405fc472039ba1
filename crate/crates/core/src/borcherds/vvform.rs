use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{Cyc8, Mp, MpC, QSeries, Q};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeTriple};
use crate::modular;
use crate::weil::WeilRep;

/// A vector-valued form: one q-series per element of `A_Λ`. Components that
/// coincide are stored once.
#[derive(Clone, Debug)]
pub struct VVForm {
    lattice: Lattice,
    rep: WeilRep,
    weight: Q,
    series: Vec<QSeries>,
    slot: Vec<usize>,
}

impl VVForm {
    /// Builds a form from per-element series, sharing equal components.
    pub fn from_components(lattice: &Lattice, weight: Q, comps: Vec<QSeries>) -> Result<VVForm> {
        let rep = WeilRep::new(lattice)?;
        if comps.len() != rep.size() {
            return Err(Error::OutOfRange(format!("expected {} components, got {}", rep.size(), comps.len())));
        }
        let mut series: Vec<QSeries> = Vec::new();
        let mut slot = Vec::with_capacity(comps.len());
        for c in comps {
            match series.iter().position(|s| *s == c) {
                Some(i) => slot.push(i),
                None => {
                    slot.push(series.len());
                    series.push(c);
                }
            }
        }
        Ok(VVForm { lattice: lattice.clone(), rep, weight, series, slot })
    }

    fn from_slots(lattice: &Lattice, rep: WeilRep, weight: Q, series: Vec<QSeries>, slot: Vec<usize>) -> VVForm {
        VVForm { lattice: lattice.clone(), rep, weight, series, slot }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn rep(&self) -> &WeilRep {
        &self.rep
    }

    pub fn weight(&self) -> Q {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.slot.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slot.is_empty()
    }

    /// The component `F_γ` for the element with index `i`.
    pub fn component(&self, i: usize) -> &QSeries {
        &self.series[self.slot[i]]
    }

    /// Distinct component series.
    pub fn distinct(&self) -> &[QSeries] {
        &self.series
    }

    /// Coefficient `c_γ(n)`.
    pub fn coeff(&self, i: usize, n: Q) -> Cyc8 {
        self.component(i).coeff(n)
    }

    /// Smallest truncation among the components (`None` if all exact).
    pub fn trunc(&self) -> Option<Q> {
        self.series.iter().filter_map(QSeries::trunc).min()
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn min_exponent(&self) -> Option<Q> {
        self.series.iter().filter_map(QSeries::valuation).min()
    }

    pub fn is_integral(&self) -> bool {
        self.series.iter().all(QSeries::is_integral)
    }

    /// Every exponent of `F_γ` lies in `q(γ)/2 + Z`.
    pub fn check_support(&self) -> bool {
        (0..self.len()).all(|i| {
            let shift = Q::new(self.rep.q4(i), 8);
            self.component(i).iter().all(|(e, _)| (e - shift).is_integer())
        })
    }

    /// `F_γ = F_{−γ}`.
    pub fn check_symmetry(&self) -> bool {
        let d = self.rep.disc();
        d.elements().all(|e| self.slot[d.index(&e)] == self.slot[d.index(&d.neg(&e))])
    }

    /// Exact equality of all components below `t`.
    pub fn eq_below(&self, o: &VVForm, t: Q) -> bool {
        self.len() == o.len() && (0..self.len()).all(|i| self.component(i).eq_below(o.component(i), t))
    }

    /// Evaluates every component at `τ`; also returns the largest tail estimate.
    pub fn eval(&self, tau: &MpC, mp: &mut Mp) -> Result<(Vec<MpC>, f64)> {
        let mut vals = Vec::with_capacity(self.series.len());
        let mut tail = 0.0f64;
        for s in &self.series {
            let (v, t) = s.eval(tau, mp)?;
            tail = tail.max(t);
            vals.push(v);
        }
        Ok((self.slot.iter().map(|&s| vals[s].clone()).collect(), tail))
    }

    /// `c_0(0)`, the constant term of the `e₀` component.
    pub fn constant_term(&self) -> Result<BigRational> {
        self.coeff(0, Q::zero())
            .to_rational()
            .ok_or_else(|| Error::Inconsistent("constant term is not rational".into()))
    }
}

/// `2^{(4−σ−l)/2}`, the multiplier of the `g⁽ⁱ⁾` block.
pub(crate) fn g_multiplier(sigma: i64, l: i64) -> Result<i64> {
    let e = 4 - sigma - l;
    if e < 0 || e % 2 != 0 {
        return Err(Error::OutOfRange(format!("4 − σ − l = {e} must be even and nonnegative")));
    }
    Ok(1i64 << (e / 2))
}

/// The form `F_Λ = f⁽⁰⁾e₀ + 2^{(4−σ−l)/2}Σ_γ g^{(2γ²)}e_γ + f⁽¹⁾e_{1_Λ}` with
/// `k = 8 + σ(Λ)`, of weight `σ(Λ)/2`. Components are exact below `order`.
pub fn construct_f(lattice: &Lattice, order: Q) -> Result<VVForm> {
    let rep = WeilRep::new(lattice)?;
    let sigma = rep.sigma();
    let l = rep.length() as i64;
    let k = 8 + sigma;
    if sigma < -12 {
        return Err(Error::OutOfRange(format!("σ = {sigma} is below −12")));
    }
    let mult = Cyc8::from_int(g_multiplier(sigma, l)?);
    let f0_full = modular::f0(k, order * Q::from(4));
    let f0 = f0_full.truncate(order);
    let f1 = modular::f1(k, order);
    let g: Vec<QSeries> = (0..4)
        .map(|i| {
            f0_full
                .filter(|e| e.is_integer() && e.to_integer().rem_euclid(4) == i)
                .scale_exponents(Q::new(1, 4))
                .scale(&mult)
        })
        .collect();
    // Components depend only on (q_class, γ = 0, γ = 1_Λ).
    let one = rep.characteristic_index();
    let mut series = Vec::new();
    let mut key_slot: BTreeMap<(usize, bool, bool), usize> = BTreeMap::new();
    let mut slot = Vec::with_capacity(rep.size());
    for i in 0..rep.size() {
        let cls = rep.q_class(i) as usize;
        let key = (cls, i == 0, i == one);
        let s = *key_slot.entry(key).or_insert_with(|| {
            let mut c = g[cls].clone();
            if key.1 {
                c = c.add(&f0);
            }
            if key.2 {
                c = c.add(&f1);
            }
            series.push(c);
            series.len() - 1
        });
        slot.push(s);
    }
    Ok(VVForm::from_slots(lattice, rep, Q::new(sigma, 2), series, slot))
}

/// Restriction `F|_L` along `Λ = U(N) ⊕ L` (the `U(N)` block first):
/// `f_{L+λ} = Σ_{n<N} f_{(n/N, 0, λ)}`.
pub fn restrict(f: &VVForm, n: i64, l: &Lattice) -> Result<VVForm> {
    check_split(f.lattice(), n, l)?;
    let m = l.rank();
    let rep_l = WeilRep::new(l)?;
    let dl = rep_l.disc();
    let dbig = f.rep().disc();
    let mut series: Vec<QSeries> = Vec::new();
    let mut key_slot: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut slot = Vec::with_capacity(rep_l.size());
    for e in dl.elements() {
        let v = dl.vector(&e);
        let mut key = Vec::with_capacity(n as usize);
        for a in 0..n {
            let mut w = Vec::with_capacity(m + 2);
            w.push(Q::new(a, n));
            w.push(Q::zero());
            w.extend(v.iter().copied());
            key.push(f.slot[dbig.index(&dbig.from_vector(&w)?)]);
        }
        let s = *key_slot.entry(key.clone()).or_insert_with(|| {
            let sum = key.iter().fold(QSeries::zero(f.trunc()), |acc, &s| acc.add(&f.series[s]));
            series.push(sum);
            series.len() - 1
        });
        slot.push(s);
    }
    Ok(VVForm::from_slots(l, rep_l, f.weight(), series, slot))
}

/// Checks that the Gram matrix of `big` is literally `U(n) ⊕ L`.
pub(crate) fn check_split(big: &Lattice, n: i64, l: &Lattice) -> Result<()> {
    let g = big.gram();
    let m = l.rank();
    let ok = g.len() == m + 2
        && g[0][0] == 0
        && g[1][1] == 0
        && g[0][1] == n
        && g[1][0] == n
        && (0..m).all(|i| g[0][i + 2] == 0 && g[1][i + 2] == 0 && (0..m).all(|j| g[i + 2][j + 2] == l.gram()[i][j]));
    if n <= 0 || !ok {
        return Err(Error::InvalidLattice(format!("lattice is not U({n}) ⊕ L for the given L")));
    }
    Ok(())
}

/// `(16 − r)(2^{(r−l)/2} + 1)`, minus 8 when `r = 12` and `δ = 0`; defined for
/// `r ≤ 12`.
pub fn weight_closed_form(t: &LatticeTriple) -> Option<i64> {
    if t.r > 12 {
        return None;
    }
    let base = (16 - t.r) * ((1i64 << ((t.r - t.l) / 2)) + 1);
    Some(if t.r == 12 && t.delta == 0 { base - 8 } else { base })
}

/// Weight of the lift computed both ways.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightReport {
    pub closed_form: Option<i64>,
    /// `c_0(0)/2`.
    pub from_series: BigRational,
}

impl WeightReport {
    pub fn new(f: &VVForm) -> Result<WeightReport> {
        let t = f.lattice().invariants()?;
        let from_series = f.constant_term()? / BigRational::from_integer(2.into());
        Ok(WeightReport { closed_form: weight_closed_form(&t), from_series })
    }

    /// True when both values exist and coincide.
    pub fn agrees(&self) -> bool {
        self.closed_form.is_some_and(|w| self.from_series.to_i64() == Some(w) && self.from_series.is_integer())
    }
}
