//! Orthogonality functionals, Gram matrices, and the definite integrals,
//! series and q-integrals obtained by pairing a generalized generating
//! function with one of them.
//!
//! | kind | support | weight |
//! |---|---|---|
//! | `ContInterval` | `[-1, 1]` | Askey–Wilson or Rogers weight over `sqrt(1 - x^2)` |
//! | `ContHalfline` | `(0, inf)` | `x^alpha / (-x;q)_inf` |
//! | `DiscreteLattice` | `q^k`, `k >= 0` | `(aq)^k / (q;q)_k` |
//! | `Bilateral` | `c q^k`, `k` in Z | `q^{(alpha+1)k} / (-c q^k;q)_inf` |
//! | `Jackson` | `q^k`, `k` in Z | `(1-q) q^k x^alpha / (-x;q)_inf` |
//!
//! Functionals are bilinear; nothing is conjugated. A corollary integrates
//! the closed-form left side of its theorem against `p_n` of the target
//! family, so its right side is the theorem's degree-`n` coefficient times
//! the norm.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // float methods in no_std builds
use num_traits::Float as _;
use crate::genfun::{EvalContext, IdentityId, IdentityReport, ParamPoint, eval_lhs, in_domain, inner_series, sample_point, t_bound};
use crate::polyfam::{
    AwParams, FamilyParams, LqlParams, QLagParams, UltraParams, aw_norm, aw_weight, lql_norm, qlag_bilateral_norm,
    qlag_continuous_brace, qlag_continuous_norm, qlag_jackson_norm, ultra_norm, ultra_weight,
};
use crate::qpoch::{PRODUCT_TOL, QBase, binom2, ln_poch_neg_inf, poch, poch_inf, poch_inf_many, poch_many};
use crate::quad::GaussLegendre;
use crate::{C64, CompensatedSum, Error, Result, real};

/// Starting Gauss–Legendre order on `[0, pi]`.
pub const INTERVAL_ORDER: usize = 256;
/// Nodes per half-line panel.
pub const PANEL_ORDER: usize = 16;
/// Starting window `K` of the two-sided sums.
pub const BILATERAL_WINDOW: usize = 60;

/// Bisection depth allowed inside one half-line panel.
const PANEL_DEPTH: usize = 24;
/// Panels below this abscissa are replaced by one substituted rule on `[0, eps]`.
const ZERO_CUT: f64 = 1e-4;
/// Interpolant deflation is used when it leaves at most this fraction of the
/// generating function's sup norm.
const DEFLATE_RATIO: f64 = 0.05;
/// Weights whose logarithm is below this underflow and are dropped.
const LN_UNDERFLOW: f64 = -745.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "SCREAMING_SNAKE_CASE"))]
pub enum FunctionalKind {
    ContInterval,
    ContHalfline,
    DiscreteLattice,
    Bilateral,
    Jackson,
}

impl FunctionalKind {
    pub const ALL: [FunctionalKind; 5] = [
        FunctionalKind::ContInterval,
        FunctionalKind::ContHalfline,
        FunctionalKind::DiscreteLattice,
        FunctionalKind::Bilateral,
        FunctionalKind::Jackson,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            FunctionalKind::ContInterval => "CONT_INTERVAL",
            FunctionalKind::ContHalfline => "CONT_HALFLINE",
            FunctionalKind::DiscreteLattice => "DISCRETE_LATTICE",
            FunctionalKind::Bilateral => "BILATERAL",
            FunctionalKind::Jackson => "JACKSON",
        }
    }
}

/// A functional bound to the family whose weight it uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalSpec {
    pub kind: FunctionalKind,
    pub family: FamilyParams,
    /// Lattice scale; bilateral sums only.
    pub c: Option<f64>,
    /// Starting Gauss–Legendre order, nodes per panel, or starting window.
    pub order: usize,
    /// Largest order, panel count, lattice length or window tried.
    pub cap: usize,
    /// Successive refinements must agree to `tol` times the integral of `|h w|`.
    pub tol: f64,
}

impl FunctionalSpec {
    /// Checks that the kind fits the family and that `c` is given exactly
    /// for bilateral sums, with `c > 0`.
    pub fn new(kind: FunctionalKind, family: FamilyParams, c: Option<f64>) -> Result<Self> {
        use FunctionalKind::*;
        let fits = match family {
            FamilyParams::AskeyWilson(_) | FamilyParams::ContQUltra(_) => kind == ContInterval,
            FamilyParams::LittleQLaguerre(_) => kind == DiscreteLattice,
            FamilyParams::QLaguerre(_) => matches!(kind, ContHalfline | Bilateral | Jackson),
        };
        if !fits {
            return Err(Error::InvalidParameter { name: "kind", reason: "functional does not carry this family" });
        }
        match (kind, c) {
            (Bilateral, Some(c)) if c > 0.0 && c.is_finite() => {}
            (Bilateral, _) => return Err(Error::InvalidParameter { name: "c", reason: "must be positive" }),
            (_, Some(_)) => return Err(Error::InvalidParameter { name: "c", reason: "bilateral sums only" }),
            _ => {}
        }
        let (order, cap, tol) = match kind {
            ContInterval => (INTERVAL_ORDER, 8192, 1e-13),
            ContHalfline => (PANEL_ORDER, 4000, 1e-12),
            DiscreteLattice => (0, 1 << 17, 1e-16),
            Bilateral | Jackson => (BILATERAL_WINDOW, 1 << 16, 1e-15),
        };
        Ok(FunctionalSpec { kind, family, c, order, cap, tol })
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    fn q(&self) -> QBase {
        self.family.base()
    }

    fn qlag_alpha(&self) -> f64 {
        match self.family {
            FamilyParams::QLaguerre(p) => p.alpha,
            _ => unreachable!("checked in FunctionalSpec::new"),
        }
    }

    /// Tag used in orthogonality reports.
    pub fn tag(&self) -> &'static str {
        match (self.kind, self.family) {
            (_, FamilyParams::AskeyWilson(_)) => "ORTHO_AW",
            (_, FamilyParams::ContQUltra(_)) => "ORTHO_CQU",
            (_, FamilyParams::LittleQLaguerre(_)) => "ORTHO_LQL",
            (FunctionalKind::ContHalfline, _) => "ORTHO_QLAG_CONT",
            (FunctionalKind::Bilateral, _) => "ORTHO_QLAG_BILATERAL",
            _ => "ORTHO_QLAG_JACKSON",
        }
    }
}

/// Value of a functional and the number of weighted nodes it used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: C64,
    pub nodes: usize,
}

/// Applies the functional to `h`; the weight comes from `spec`.
pub fn apply<F: FnMut(f64) -> Result<C64>>(spec: &FunctionalSpec, mut h: F) -> Result<Evaluation> {
    if !(spec.tol > 0.0) {
        return Err(Error::InvalidTolerance(spec.tol));
    }
    match spec.kind {
        FunctionalKind::ContInterval => interval(spec, &mut h),
        FunctionalKind::ContHalfline => halfline(spec, &mut h),
        FunctionalKind::DiscreteLattice => lattice(spec, &mut h),
        FunctionalKind::Bilateral => {
            let (q, al) = (spec.q(), spec.qlag_alpha());
            let c = spec.c.expect("checked in FunctionalSpec::new");
            let lq = q.ln();
            two_sided(spec, |k| {
                let lw = (al + 1.0) * k as f64 * lq - ln_poch_neg_inf(c * (k as f64 * lq).exp(), q, PRODUCT_TOL)?;
                if lw < LN_UNDERFLOW {
                    return Ok(None);
                }
                Ok(Some(h(c * (k as f64 * lq).exp())? * lw.exp()))
            })
        }
        FunctionalKind::Jackson => {
            let (q, al) = (spec.q(), spec.qlag_alpha());
            let scale = 1.0 - q.get();
            let lq = q.ln();
            two_sided(spec, |k| {
                // in logs: q^k underflows long before the weight does when alpha is near -1
                let x = (k as f64 * lq).exp();
                let lw = (al + 1.0) * k as f64 * lq - ln_poch_neg_inf(x, q, PRODUCT_TOL)?;
                if lw < LN_UNDERFLOW {
                    return Ok(None);
                }
                Ok(Some(h(x)? * (scale * lw.exp())))
            })
        }
    }
}

/// `<f, g>` under the functional.
pub fn inner_product<F, G>(spec: &FunctionalSpec, mut f: F, mut g: G) -> Result<C64>
where
    F: FnMut(f64) -> Result<C64>,
    G: FnMut(f64) -> Result<C64>,
{
    Ok(apply(spec, |x| Ok(f(x)? * g(x)?))?.value)
}

/// `ln (x^alpha / (-x;q)_inf)`.
fn halfline_ln_weight(x: f64, alpha: f64, q: QBase) -> Result<f64> {
    Ok(alpha * x.ln() - ln_poch_neg_inf(x, q, PRODUCT_TOL)?)
}

fn interval_weight(spec: &FunctionalSpec, x: f64) -> Result<f64> {
    match &spec.family {
        FamilyParams::AskeyWilson(p) => aw_weight(x, p, PRODUCT_TOL),
        FamilyParams::ContQUltra(p) => ultra_weight(x, p, PRODUCT_TOL),
        _ => unreachable!("checked in FunctionalSpec::new"),
    }
}

/// `int_0^pi h(cos theta) w(cos theta) d theta`, order doubled until stable.
fn interval(spec: &FunctionalSpec, h: &mut dyn FnMut(f64) -> Result<C64>) -> Result<Evaluation> {
    let mut order = spec.order.max(2);
    let mut prev: Option<C64> = None;
    let mut nodes = 0;
    loop {
        let rule = GaussLegendre::new(order);
        let mut acc = CompensatedSum::new();
        let mut mag = 0.0;
        for (theta, w) in rule.mapped(0.0, PI) {
            let x = theta.cos();
            let v = h(x)? * (w * interval_weight(spec, x)?);
            mag += v.norm();
            acc.add(v);
        }
        nodes += order;
        let v = acc.value();
        if let Some(p) = prev {
            if (v - p).norm() <= spec.tol * mag {
                return Ok(Evaluation { value: v, nodes });
            }
        }
        if 2 * order > spec.cap {
            return Err(Error::QuadratureNonconvergence);
        }
        prev = Some(v);
        order *= 2;
    }
}

/// Geometric panels `[q^{k+1}, q^k]` in `ln x`, bisected until the two-level
/// estimates agree. Below `ZERO_CUT` the substitution `x = eps v^{1/(alpha+1)}`
/// absorbs the `x^alpha` endpoint behaviour.
fn halfline(spec: &FunctionalSpec, h: &mut dyn FnMut(f64) -> Result<C64>) -> Result<Evaluation> {
    let q = spec.q();
    let al = spec.qlag_alpha();
    let lq = q.ln();
    let rule = GaussLegendre::new(spec.order.max(2));
    let mut nodes = 0;
    let k0 = (ZERO_CUT.ln() / lq).ceil() as i64;
    let eps = q.powi(k0);

    let mut acc = CompensatedSum::new();
    let mut mag = 0.0;
    {
        let zero_rule = GaussLegendre::new(64);
        let p = 1.0 / (al + 1.0);
        let pre = (eps.ln() * (al + 1.0)).exp() / (al + 1.0);
        for (v, w) in zero_rule.mapped(0.0, 1.0) {
            let x = eps * v.powf(p);
            let g = h(x)? / ln_poch_neg_inf(x, q, PRODUCT_TOL)?.exp();
            let term = g * (pre * w);
            mag += term.norm();
            acc.add(term);
        }
        nodes += 64;
    }
    // integrand in s = ln x, including dx = x ds
    let mut f = |s: f64| -> Result<C64> {
        let x = s.exp();
        let lw = s + halfline_ln_weight(x, al, q)?;
        if lw < LN_UNDERFLOW {
            return Ok(real(0.0));
        }
        Ok(h(x)? * lw.exp())
    };
    let mut quiet = 0;
    let mut k = k0 - 1;
    let mut panels = 0;
    loop {
        let (a, b) = ((k + 1) as f64 * lq, k as f64 * lq);
        let (v, m, used) = panel(&rule, &mut f, a, b, spec.tol, PANEL_DEPTH)?;
        acc.add(v);
        mag += m;
        nodes += used;
        panels += 1;
        if k < 0 {
            quiet = if m <= 1e-18 * mag { quiet + 1 } else { 0 };
            if quiet >= 3 {
                break;
            }
        }
        if panels > spec.cap {
            return Err(Error::QuadratureNonconvergence);
        }
        k -= 1;
    }
    Ok(Evaluation { value: acc.value(), nodes })
}

/// One rule on `[a, b]`: value and integral of the modulus.
fn rule_on(rule: &GaussLegendre, f: &mut dyn FnMut(f64) -> Result<C64>, a: f64, b: f64) -> Result<(C64, f64)> {
    let mut v = real(0.0);
    let mut m = 0.0;
    for (s, w) in rule.mapped(a, b) {
        let y = f(s)? * w;
        v += y;
        m += y.norm();
    }
    Ok((v, m))
}

fn panel(
    rule: &GaussLegendre,
    f: &mut dyn FnMut(f64) -> Result<C64>,
    a: f64,
    b: f64,
    tol: f64,
    depth: usize,
) -> Result<(C64, f64, usize)> {
    let mid = 0.5 * (a + b);
    let (whole, _) = rule_on(rule, f, a, b)?;
    let (l, ml) = rule_on(rule, f, a, mid)?;
    let (r, mr) = rule_on(rule, f, mid, b)?;
    let n = 3 * rule.order();
    let m = ml + mr;
    if (whole - (l + r)).norm() <= tol * m || m == 0.0 {
        return Ok((l + r, m, n));
    }
    if depth == 0 {
        return Err(Error::QuadratureNonconvergence);
    }
    let (vl, ml, nl) = panel(rule, f, a, mid, tol, depth - 1)?;
    let (vr, mr, nr) = panel(rule, f, mid, b, tol, depth - 1)?;
    Ok((vl + vr, ml + mr, n + nl + nr))
}

/// `sum_{k>=0} h(q^k) (aq)^k / (q;q)_k`, stopped when the geometric bound on
/// the tail from the current weight ratio falls below `tol` twice running.
fn lattice(spec: &FunctionalSpec, h: &mut dyn FnMut(f64) -> Result<C64>) -> Result<Evaluation> {
    let FamilyParams::LittleQLaguerre(p) = spec.family else { unreachable!("checked in FunctionalSpec::new") };
    let q = p.base;
    let aq = p.a * q.get();
    let mut acc = CompensatedSum::new();
    let mut mag = 0.0;
    let mut w = 1.0;
    let mut quiet = 0;
    for k in 0..spec.cap {
        let x = q.powi(k as i64);
        let term = h(x)? * w;
        acc.add(term);
        mag += term.norm();
        let r = aq / (1.0 - x * q.get());
        let tail = if r < 1.0 { term.norm() * r / (1.0 - r) } else { f64::INFINITY };
        quiet = if tail <= spec.tol * mag { quiet + 1 } else { 0 };
        if quiet >= 2 {
            return Ok(Evaluation { value: acc.value(), nodes: k + 1 });
        }
        w *= r;
    }
    Err(Error::TailNonconvergence { terms: spec.cap })
}

/// `sum_{|k| <= K} term(k)` with `K` doubled until two windows agree.
/// `term` returns `None` once the weight underflows; that side then stops.
fn two_sided<T: FnMut(i64) -> Result<Option<C64>>>(spec: &FunctionalSpec, mut term: T) -> Result<Evaluation> {
    let mut acc = CompensatedSum::new();
    let mut mag = 0.0;
    let mut nodes = 0;
    let (mut pos_done, mut neg_done) = (false, false);
    // last accepted |term| on each side
    let mut last = [f64::INFINITY; 2];
    let mut add = |k: i64, done: &mut bool, acc: &mut CompensatedSum, mag: &mut f64, nodes: &mut usize| -> Result<()> {
        if *done {
            return Ok(());
        }
        let side = usize::from(k < 0);
        match term(k)? {
            // h may overflow before the weight underflows; past a negligible term that ends the side
            Some(v) if !v.is_finite() => {
                if k.unsigned_abs() > 8 && last[side] <= 1e-3 * spec.tol * *mag {
                    *done = true;
                } else {
                    return Err(Error::TailNonconvergence { terms: *nodes });
                }
            }
            Some(v) => {
                acc.add(v);
                last[side] = v.norm();
                *mag += v.norm();
                *nodes += 1;
            }
            // The weight is unimodal in k, so past its peak it only shrinks.
            None if k.unsigned_abs() > 8 => *done = true,
            None => {}
        }
        Ok(())
    };
    let k_start = spec.order.max(1) as i64;
    add(0, &mut false, &mut acc, &mut mag, &mut nodes)?;
    for k in 1..=k_start {
        add(k, &mut pos_done, &mut acc, &mut mag, &mut nodes)?;
        add(-k, &mut neg_done, &mut acc, &mut mag, &mut nodes)?;
    }
    let mut window = k_start;
    loop {
        let prev = acc.value();
        let next = 2 * window;
        for k in window + 1..=next {
            add(k, &mut pos_done, &mut acc, &mut mag, &mut nodes)?;
            add(-k, &mut neg_done, &mut acc, &mut mag, &mut nodes)?;
        }
        let v = acc.value();
        if (v - prev).norm() <= spec.tol * mag {
            return Ok(Evaluation { value: v, nodes });
        }
        if next as usize > spec.cap {
            return Err(Error::TailNonconvergence { terms: nodes });
        }
        window = next;
    }
}

/// Closed-form `<p_n, p_n>` for the functional.
pub fn closed_form_norm(spec: &FunctionalSpec, n: usize) -> Result<f64> {
    match (spec.kind, &spec.family) {
        (_, FamilyParams::AskeyWilson(p)) => Ok(2.0 * PI * aw_norm(n, p, PRODUCT_TOL)?),
        (_, FamilyParams::ContQUltra(p)) => ultra_norm(n, p),
        (_, FamilyParams::LittleQLaguerre(p)) => lql_norm(n, p),
        (FunctionalKind::ContHalfline, FamilyParams::QLaguerre(p)) => qlag_continuous_norm(n, p),
        (FunctionalKind::Bilateral, FamilyParams::QLaguerre(p)) => qlag_bilateral_norm(n, p, spec.c.unwrap_or(0.0)),
        (_, FamilyParams::QLaguerre(p)) => qlag_jackson_norm(n, p),
    }
}

/// Parameter point echoing the functional, for reports.
fn spec_point(spec: &FunctionalSpec) -> ParamPoint {
    let p = ParamPoint::new(spec.q(), 0.0, 0.0);
    let p = match spec.family {
        FamilyParams::AskeyWilson(a) => p.with_a(a.a).with_b(a.b).with_c(a.c).with_d(a.d),
        FamilyParams::ContQUltra(u) => p.with_beta(u.beta),
        FamilyParams::LittleQLaguerre(l) => p.with_a(l.a),
        FamilyParams::QLaguerre(l) => p.with_alpha(l.alpha),
    };
    match spec.c {
        Some(c) => p.with_scale(c),
        None => p,
    }
}

/// `<p_m, p_n>` against `norm * delta_{mn}`.
pub fn verify_orthogonality(spec: &FunctionalSpec, m: usize, n: usize) -> IdentityReport {
    let point = spec_point(spec);
    let run = || -> Result<IdentityReport> {
        let fam = spec.family;
        let ev = apply(spec, |x| Ok(fam.eval(m, x)? * fam.eval(n, x)?))?;
        let rhs = if m == n { closed_form_norm(spec, n)? } else { 0.0 };
        let mut r = IdentityReport::new(spec.tag(), point, ev.value, real(rhs));
        r.m = Some(m);
        r.n = Some(n);
        r.n_terms_outer = ev.nodes;
        Ok(r)
    };
    run().unwrap_or_else(|e| {
        let mut r = IdentityReport::failed(spec.tag(), point, &e);
        r.m = Some(m);
        r.n = Some(n);
        r
    })
}

/// Gram matrix `<p_m, p_n>` for `m, n <= nmax` with the closed-form norms.
#[derive(Debug, Clone, PartialEq)]
pub struct Gram {
    pub entries: Vec<Vec<C64>>,
    pub norms: Vec<f64>,
}

impl Gram {
    /// `max_{m != n} |G_mn| / sqrt(|h_m h_n|)`.
    pub fn off_diagonal_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (m, row) in self.entries.iter().enumerate() {
            for (n, g) in row.iter().enumerate() {
                if m != n {
                    worst = worst.max(g.norm() / (self.norms[m] * self.norms[n]).abs().sqrt());
                }
            }
        }
        worst
    }

    /// `max_n |G_nn / h_n - 1|`.
    pub fn diagonal_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (n, row) in self.entries.iter().enumerate() {
            worst = worst.max((row[n] / self.norms[n] - 1.0).norm());
        }
        worst
    }
}

/// Symmetric Gram matrix; each pair is integrated once.
#[allow(clippy::needless_range_loop)] // both triangles are filled
pub fn gram_matrix(spec: &FunctionalSpec, nmax: usize) -> Result<Gram> {
    let size = nmax + 1;
    let mut entries = alloc::vec![alloc::vec![real(0.0); size]; size];
    let fam = spec.family;
    for m in 0..size {
        for n in m..size {
            let v = apply(spec, |x| Ok(fam.eval(m, x)? * fam.eval(n, x)?))?.value;
            entries[m][n] = v;
            entries[n][m] = v;
        }
    }
    let norms = (0..size).map(|n| closed_form_norm(spec, n)).collect::<Result<Vec<_>>>()?;
    Ok(Gram { entries, norms })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(into = "&'static str", try_from = "String"))]
pub enum CorollaryId {
    CAw,
    CCqu1,
    CCqu2,
    CCqu3,
    CCqu4,
    CCqu5,
    CCqu6,
    CCqu7,
    C26,
    C27,
    C28,
    C29,
    C30,
    C31,
    C32,
    C33,
    C34,
    C35,
}

use CorollaryId::*;

impl CorollaryId {
    pub const ALL: [CorollaryId; 18] =
        [CAw, CCqu1, CCqu2, CCqu3, CCqu4, CCqu5, CCqu6, CCqu7, C26, C27, C28, C29, C30, C31, C32, C33, C34, C35];

    pub fn tag(self) -> &'static str {
        match self {
            CAw => "C_AW",
            CCqu1 => "C_CQU_1",
            CCqu2 => "C_CQU_2",
            CCqu3 => "C_CQU_3",
            CCqu4 => "C_CQU_4",
            CCqu5 => "C_CQU_5",
            CCqu6 => "C_CQU_6",
            CCqu7 => "C_CQU_7",
            C26 => "C26",
            C27 => "C27",
            C28 => "C28",
            C29 => "C29",
            C30 => "C30",
            C31 => "C31",
            C32 => "C32",
            C33 => "C33",
            C34 => "C34",
            C35 => "C35",
        }
    }

    pub fn from_tag(tag: &str) -> Option<CorollaryId> {
        Self::ALL.into_iter().find(|c| c.tag() == tag)
    }

    /// The generalized generating function paired with the functional.
    pub fn theorem(self) -> IdentityId {
        match self {
            CAw => IdentityId::T2,
            CCqu1 => IdentityId::T3,
            CCqu2 => IdentityId::T4,
            CCqu3 => IdentityId::T5,
            CCqu4 => IdentityId::T6,
            CCqu5 => IdentityId::T7,
            CCqu6 => IdentityId::T8,
            CCqu7 => IdentityId::T9,
            C26 | C30 | C33 => IdentityId::T13,
            C27 | C31 | C34 => IdentityId::T14,
            C28 | C32 | C35 => IdentityId::T15,
            C29 => IdentityId::T11,
        }
    }

    pub fn kind(self) -> FunctionalKind {
        match self {
            C26 | C27 | C28 => FunctionalKind::ContHalfline,
            C29 => FunctionalKind::DiscreteLattice,
            C30 | C31 | C32 => FunctionalKind::Bilateral,
            C33 | C34 | C35 => FunctionalKind::Jackson,
            _ => FunctionalKind::ContInterval,
        }
    }

    /// Whether the statement is unsettled, so its residual is reported
    /// without counting as a failure.
    pub fn is_flagged(self) -> bool {
        self == C29
    }

    /// Parameter names read from a [`ParamPoint`]; `scale` is the lattice `c`.
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            C29 => &["alpha", "beta"],
            C30 | C31 => &["alpha", "beta", "scale"],
            C32 => &["alpha", "beta", "gamma", "scale"],
            _ => self.theorem().parameters(),
        }
    }
}

impl From<CorollaryId> for &'static str {
    fn from(id: CorollaryId) -> Self {
        id.tag()
    }
}

impl TryFrom<String> for CorollaryId {
    type Error = String;

    fn try_from(s: String) -> core::result::Result<Self, String> {
        CorollaryId::from_tag(&s).ok_or_else(|| format!("unknown corollary tag {s}"))
    }
}

/// The point in the theorem's naming; only the lattice corollary renames.
fn theorem_point(id: CorollaryId, p: &ParamPoint) -> ParamPoint {
    let mut out = *p;
    out.x = 0.0;
    if id == C29 {
        out.a = p.alpha;
        out.b = p.beta;
        out.alpha = None;
        out.beta = None;
    }
    out
}

fn scale(p: &ParamPoint) -> Result<f64> {
    p.scale.ok_or(Error::MissingParameter("scale"))
}

/// The functional whose orthogonal family appears in the corollary.
pub fn corollary_functional(id: CorollaryId, p: &ParamPoint) -> Result<FunctionalSpec> {
    let q = p.q;
    let family = match id {
        CAw => FamilyParams::AskeyWilson(AwParams::new(p.get("alpha")?, p.get("b")?, p.get("c")?, p.get("d")?, q)),
        CCqu4 => FamilyParams::ContQUltra(UltraParams::new(p.get_real("alpha")?, q)?),
        CCqu1 | CCqu2 | CCqu3 | CCqu5 | CCqu6 | CCqu7 => {
            FamilyParams::ContQUltra(UltraParams::new(p.get_real("gamma")?, q)?)
        }
        C29 => FamilyParams::LittleQLaguerre(LqlParams::new(p.get_real("beta")?, q)?),
        _ => FamilyParams::QLaguerre(QLagParams::new(p.get_real("beta")?, q)?),
    };
    let c = if id.kind() == FunctionalKind::Bilateral { Some(scale(p)?) } else { None };
    FunctionalSpec::new(id.kind(), family, c)
}

/// Whether the point satisfies the corollary's stated hypotheses.
///
/// The lattice corollary's `t` bound is read as
/// `min((1 - beta^2)(1 + sqrt(q) beta), 1)`.
pub fn corollary_in_domain(id: CorollaryId, p: &ParamPoint) -> bool {
    if id == C29 {
        let qf = p.q.get();
        let inside = |n| matches!(p.get_real(n), Ok(v) if v > 0.0 && v * qf < 1.0);
        if !(inside("alpha") && inside("beta")) {
            return false;
        }
        let b = p.get_real("beta").unwrap_or(0.0);
        return p.t.abs() < ((1.0 - b * b) * (1.0 + qf.sqrt() * b)).min(1.0);
    }
    if id.kind() == FunctionalKind::Bilateral && !matches!(p.scale, Some(c) if c > 0.0 && c.is_finite()) {
        return false;
    }
    in_domain(id.theorem(), &theorem_point(id, p))
}

/// Left-side factor depending on `t` only: the corollary integrand divided
/// by its theorem's left side.
fn lhs_factor(id: CorollaryId, p: &ParamPoint, ctx: &EvalContext) -> Result<C64> {
    let tol = ctx.tol.max(PRODUCT_TOL);
    let t = real(p.t);
    let inf = |a: C64| poch_inf(a, p.q, tol);
    Ok(match id {
        C26 | C30 | C33 => inf(t)?,
        C27 | C31 | C34 | C29 => real(1.0) / inf(t)?,
        C28 | C32 | C35 => inf(t)? / inf(p.get("gamma")? * t)?,
        _ => real(1.0),
    })
}

/// The displayed right side less its `r phi s` factor, which is shared
/// with the theorem.
fn rhs_prefactor(id: CorollaryId, p: &ParamPoint, n: usize, ctx: &EvalContext) -> Result<C64> {
    let q = p.q;
    let qf = q.get();
    let tol = ctx.tol.max(PRODUCT_TOL);
    let inf = |args: &[C64]| poch_inf_many(args, q, tol);
    let t = p.t;
    let tn = t.powi(n as i32);
    let qn = q.powi(n as i64);
    let two_pi = 2.0 * PI;
    let sq = qf.sqrt();
    let c2 = q.powf(binom2(n as i64));
    let ratio = |num: &[C64], den: &[C64]| -> Result<C64> {
        let d = poch_many(den, q, n);
        if d == real(0.0) {
            return Err(Error::DegenerateDenominator("corollary prefactor"));
        }
        Ok(poch_many(num, q, n) / d)
    };
    // Rogers norm pieces (g, qg)_inf / (g^2, q)_inf with the free parameter g
    let rogers = |g: C64| -> Result<C64> { Ok(inf(&[g, g * qf])? / inf(&[g * g, real(qf)])?) };
    Ok(match id {
        CAw => {
            let (a, b, c, d, al) = (p.get("a")?, p.get("b")?, p.get("c")?, p.get("d")?, p.get("alpha")?);
            let big_a = a * b * c * d;
            let (ra, raq) = (big_a.sqrt(), (big_a / qf).sqrt());
            let top = inf(&[al * b * c * d * q.powi(2 * n as i64)])?;
            let bottom = inf(&[real(qn * qf), al * b * qn, al * c * qn, al * d * qn, b * c * qn, b * d * qn, c * d * qn])?;
            two_pi * tn * top / bottom * ratio(&[raq, -raq, ra, -ra], &[real(qf), a * b, c * d, big_a / qf])?
        }
        CCqu1 => {
            let (b, g) = (p.get("beta")?, p.get("gamma")?);
            two_pi * tn * rogers(g)? * ratio(&[b, g * g], &[real(qf), g * qf])?
        }
        CCqu2 => {
            let (b, g) = (p.get("beta")?, p.get("gamma")?);
            two_pi * (-b * t).powi(n as i32) * c2 * rogers(g)? * ratio(&[b, g * g], &[real(qf), b * b, g * qf])?
        }
        CCqu3 => {
            let (b, g) = (p.get("beta")?, p.get("gamma")?);
            two_pi * tn * rogers(g)? * ratio(&[b, g * g], &[real(qf), b * b, g * qf])?
        }
        CCqu4 => {
            let (al, b, g) = (p.get("alpha")?, p.get("beta")?, p.get("gamma")?);
            two_pi * tn * rogers(al)? * ratio(&[al * al, g, b], &[real(qf), b * b, al * qf])?
        }
        CCqu5 | CCqu6 | CCqu7 => {
            let (b, g) = (p.get("beta")?, p.get("gamma")?);
            let (num, den): ([C64; 4], [C64; 4]) = match id {
                CCqu5 => ([g * g, b, b * sq, -b * sq], [b * b, -qf * b, g * qf, real(qf)]),
                CCqu6 => ([g * g, b, -b, -b * sq], [b * b, b * sq, g * qf, real(qf)]),
                _ => ([g * g, b, -b, b * sq], [b * b, -b * sq, g * qf, real(qf)]),
            };
            two_pi * tn * rogers(g)? * ratio(&num, &den)?
        }
        C26 | C27 | C28 => {
            let (al, be) = (p.get_real("alpha")?, p.get_real("beta")?);
            let brace = qlag_continuous_brace(n, &QLagParams::new(be, q)?)?;
            let shift = q.powf(al - be);
            let lead = poch(real(q.powf(al + 1.0)), q, n);
            let tc = real(t);
            let coef = match id {
                C26 => (shift * t).powi(n as i32) * inf(&[tc])?,
                // printed without the q^{C(n,2)} that the theorem coefficient carries
                C27 => (-shift * t).powi(n as i32) * c2 / inf(&[tc])?,
                _ => {
                    let g = p.get("gamma")?;
                    (shift * t).powi(n as i32) * inf(&[tc])? * poch(g, q, n) / inf(&[g * t])?
                }
            };
            -coef / (qn * lead) * brace
        }
        C29 => {
            let (al, be) = (p.get_real("alpha")?, p.get_real("beta")?);
            let den = inf(&[real(t), real(qf * be)])? * poch(real(qf * al), q, n);
            real(c2 * (-qf * be * t).powi(n as i32)) / den
        }
        C30 | C31 | C32 | C33 | C34 | C35 => {
            let (al, be) = (p.get_real("alpha")?, p.get_real("beta")?);
            let qb1 = q.powf(be + 1.0);
            let qa1 = real(q.powf(al + 1.0));
            let shift = q.powf(al - be);
            // (c, q/c) pair and the leading constant; Jackson is c = 1 with the (-1;q)_inf = 2 (-q;q)_inf split
            let (top, bottom, lead) = if matches!(id, C30 | C31 | C32) {
                let c = scale(p)?;
                (inf(&[real(qf), real(-c * qb1), real(-q.powf(-be) / c)])?, inf(&[real(qb1), real(-c), real(-qf / c)])?, 1.0)
            } else {
                (inf(&[real(qf), real(-qb1), real(-q.powf(-be))])?, inf(&[real(qb1), real(-qf), real(-qf)])?, 0.5 * (1.0 - qf))
            };
            let tc = real(t);
            let core = top / bottom * poch(real(qb1), q, n) / (qn * poch_many(&[real(qf), qa1], q, n));
            let coef = match id {
                C30 | C33 => (shift * t).powi(n as i32) * inf(&[tc])?,
                C31 | C34 => (-shift * t).powi(n as i32) * c2 / inf(&[tc])?,
                _ => {
                    let g = p.get("gamma")?;
                    (shift * t).powi(n as i32) * inf(&[tc])? * poch(g, q, n) / inf(&[g * t])?
                }
            };
            lead * coef * core
        }
    })
}

/// Functional applied to (generating function) x `p_n` against the
/// corollary's closed form.
pub fn verify_corollary(id: CorollaryId, point: &ParamPoint, n: usize, ctx: &EvalContext) -> IdentityReport {
    match corollary_inner(id, point, n, ctx) {
        Ok(r) => r,
        Err(e) => {
            let mut r = IdentityReport::failed(id.tag(), *point, &e);
            r.n = Some(n);
            r.in_domain = corollary_in_domain(id, point);
            r
        }
    }
}

fn corollary_inner(id: CorollaryId, point: &ParamPoint, n: usize, ctx: &EvalContext) -> Result<IdentityReport> {
    let th = id.theorem();
    let tp = theorem_point(id, point);
    let mut spec = corollary_functional(id, point)?;
    if spec.kind == FunctionalKind::ContInterval {
        spec = spec.with_order(ctx.quad_order.max(2));
    }
    let fam = spec.family;
    let factor = lhs_factor(id, point, ctx)?;
    let gf = |x: f64| -> Result<C64> {
        let mut at = tp;
        at.x = x;
        Ok(factor * eval_lhs(th, &at, ctx)?)
    };
    let mut deflate = None;
    if spec.kind == FunctionalKind::ContInterval && n > 0 {
        // p_n annihilates degree < n, so removing the interpolant changes nothing
        // exactly. It pays when the generating function is nearly of low degree,
        // where the plain integrand is dominated by mass that must cancel.
        let low = Chebyshev::interpolate(n, gf)?;
        let (mut full, mut rest) = (0.0f64, 0.0f64);
        for j in 0..=8 * n + 16 {
            let x = (j as f64 * PI / (8 * n + 16) as f64).cos();
            let v = gf(x)?;
            full = full.max(v.norm());
            rest = rest.max((v - low.eval(x)).norm());
        }
        let ratio = rest / full;
        if ratio < DEFLATE_RATIO {
            // the subtraction rounds at eps |gf|; refinement cannot see below that
            spec = spec.with_tol(spec.tol.max(100.0 * f64::EPSILON / ratio.max(1e-300)));
            deflate = Some(low);
        }
    }
    let ev = match &deflate {
        Some(low) => apply(&spec, |x| Ok((gf(x)? - low.eval(x)) * fam.eval(n, x)?))?,
        None => apply(&spec, |x| Ok(gf(x)? * fam.eval(n, x)?))?,
    };
    let (inner, terms) = inner_series(th, &tp, ctx, n)?;
    let rhs = rhs_prefactor(id, point, n, ctx)? * inner;
    let mut r = IdentityReport::new(id.tag(), *point, ev.value, rhs);
    r.n = Some(n);
    r.n_terms_outer = ev.nodes;
    r.n_terms_inner = terms;
    r.in_domain = corollary_in_domain(id, point);
    Ok(r)
}

/// Degree `n - 1` interpolant at the first-kind Chebyshev nodes of `[-1, 1]`,
/// evaluated in barycentric form.
struct Chebyshev {
    nodes: Vec<f64>,
    values: Vec<C64>,
    weights: Vec<f64>,
}

impl Chebyshev {
    fn interpolate(n: usize, mut f: impl FnMut(f64) -> Result<C64>) -> Result<Self> {
        let mut nodes = Vec::with_capacity(n);
        let mut values = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for j in 0..n {
            let th = (2 * j + 1) as f64 * PI / (2 * n) as f64;
            nodes.push(th.cos());
            values.push(f(th.cos())?);
            weights.push(if j % 2 == 0 { th.sin() } else { -th.sin() });
        }
        Ok(Chebyshev { nodes, values, weights })
    }

    fn eval(&self, x: f64) -> C64 {
        let (mut num, mut den) = (real(0.0), 0.0);
        for ((&xj, &fj), &wj) in self.nodes.iter().zip(&self.values).zip(&self.weights) {
            if x == xj {
                return fj;
            }
            let c = wj / (x - xj);
            num += fj * c;
            den += c;
        }
        num / den
    }
}

/// A point inside the corollary's hypotheses with `|t|` at most 0.9 of its
/// bound. Bilateral scales are drawn log-uniformly from `[1/5, 5]`.
pub fn sample_corollary_point(id: CorollaryId, q: QBase, u: &mut impl FnMut() -> f64) -> ParamPoint {
    if id == C29 {
        let qf = q.get();
        let al = 0.05 + (0.95 / qf - 0.05) * u();
        let be = 0.05 + 0.9 * u();
        let mut p = ParamPoint::new(q, 0.0, 0.0).with_alpha(al).with_beta(be);
        let printed = ((1.0 - be * be) * (1.0 + qf.sqrt() * be)).min(1.0);
        let lattice = t_bound(IdentityId::T11, &ParamPoint::new(q, 0.0, 0.0).with_a(al)).unwrap_or(0.0);
        p.t = 0.9 * printed.min(lattice) * (2.0 * u() - 1.0);
        return p;
    }
    let mut p = sample_point(id.theorem(), q, u);
    p.x = 0.0;
    if id.kind() == FunctionalKind::Bilateral {
        p = p.with_scale((5f64.ln() * (2.0 * u() - 1.0)).exp());
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::polyfam::{cont_q_ultra, q_laguerre};
    use proptest::prelude::*;

    fn qb(q: f64) -> QBase {
        QBase::new(q).unwrap()
    }

    fn ctx() -> EvalContext {
        EvalContext::default()
    }

    fn one(_: f64) -> Result<C64> {
        Ok(real(1.0))
    }

    fn ultra(beta: f64, q: f64) -> FunctionalSpec {
        FunctionalSpec::new(FunctionalKind::ContInterval, FamilyParams::ContQUltra(UltraParams::new(beta, qb(q)).unwrap()), None)
            .unwrap()
    }

    fn qlag(kind: FunctionalKind, alpha: f64, q: f64, c: Option<f64>) -> FunctionalSpec {
        FunctionalSpec::new(kind, FamilyParams::QLaguerre(QLagParams::new(alpha, qb(q)).unwrap()), c).unwrap()
    }

    fn lattice_spec(a: f64, q: f64) -> FunctionalSpec {
        let fam = FamilyParams::LittleQLaguerre(LqlParams::new(a, qb(q)).unwrap());
        FunctionalSpec::new(FunctionalKind::DiscreteLattice, fam, None).unwrap()
    }

    #[test]
    fn spec_validation() {
        let q = qb(0.5);
        let lql = FamilyParams::LittleQLaguerre(LqlParams::new(0.5, q).unwrap());
        assert!(FunctionalSpec::new(FunctionalKind::ContInterval, lql, None).is_err());
        let ql = FamilyParams::QLaguerre(QLagParams::new(0.5, q).unwrap());
        assert!(FunctionalSpec::new(FunctionalKind::Bilateral, ql, None).is_err());
        assert!(FunctionalSpec::new(FunctionalKind::Bilateral, ql, Some(0.0)).is_err());
        assert!(FunctionalSpec::new(FunctionalKind::Jackson, ql, Some(1.0)).is_err());
        assert!(FunctionalSpec::new(FunctionalKind::Bilateral, ql, Some(1.0)).is_ok());
    }

    #[test]
    fn lattice_total_mass() {
        // q-binomial theorem with a zero numerator: sum (aq)^k/(q)_k = 1/(aq)_inf
        let v = apply(&lattice_spec(0.5, 0.5), one).unwrap().value;
        let want = 1.0 / poch_inf(real(0.25), qb(0.5), PRODUCT_TOL).unwrap().re;
        assert!((v.re - want).abs() < 1e-10 * want, "{v} {want}");
    }

    #[test]
    fn rogers_parity_orthogonality() {
        let spec = ultra(0.4, 0.5);
        let p = UltraParams::new(0.4, qb(0.5)).unwrap();
        let c = |n| move |x: f64| cont_q_ultra(n, x, &p).map(real);
        let v = inner_product(&spec, c(0), c(1)).unwrap();
        assert!(v.norm() < 1e-8 * ultra_norm(0, &p).unwrap());
    }

    #[test]
    fn bilateral_total_mass() {
        let spec = qlag(FunctionalKind::Bilateral, 0.5, 0.5, Some(1.0));
        let v = apply(&spec, one).unwrap().value;
        // constant assembled directly from the products
        let q = qb(0.5);
        let inf = |a: f64| poch_inf(real(a), q, PRODUCT_TOL).unwrap().re;
        let want = inf(0.5) * inf(-(0.5f64.powf(1.5))) * inf(-(0.5f64.powf(-0.5))) / (inf(0.5f64.powf(1.5)) * inf(-1.0) * inf(-0.5));
        assert!((v.re - want).abs() < 1e-8 * want, "{v} {want}");
    }

    #[test]
    fn aw_norm_two() {
        let p = AwParams::real(0.3, 0.2, 0.1, 0.05, qb(0.5));
        let spec = FunctionalSpec::new(FunctionalKind::ContInterval, FamilyParams::AskeyWilson(p), None).unwrap();
        let r = verify_orthogonality(&spec, 2, 2);
        assert!((r.lhs.re / r.rhs.re - 1.0).abs() < 1e-6, "{r:?}");
        let r = verify_orthogonality(&spec, 0, 3);
        assert!(r.lhs.norm() < 1e-7 * closed_form_norm(&spec, 0).unwrap().sqrt() * closed_form_norm(&spec, 3).unwrap().sqrt());
    }

    #[test]
    fn halfline_integer_branch() {
        let spec = qlag(FunctionalKind::ContHalfline, 2.0, 0.5, None);
        let r = verify_orthogonality(&spec, 1, 1);
        assert!(r.error.is_none(), "{r:?}");
        assert!((r.lhs.re / r.rhs.re - 1.0).abs() < 1e-5, "{r:?}");
    }

    #[test]
    fn gram_matrices_diagonal() {
        let q = qb(0.5);
        let aw = AwParams::new(real(0.3), real(-0.2), c64(0.1, 0.4), c64(0.1, -0.4), q);
        let specs = [
            FunctionalSpec::new(FunctionalKind::ContInterval, FamilyParams::AskeyWilson(aw), None).unwrap(),
            ultra(-0.6, 0.3),
            lattice_spec(1.5, 0.6),
            qlag(FunctionalKind::ContHalfline, -0.4, 0.5, None),
            qlag(FunctionalKind::ContHalfline, 1.0, 0.7, None),
            qlag(FunctionalKind::Bilateral, 0.7, 0.4, Some(2.5)),
            qlag(FunctionalKind::Jackson, 1.3, 0.6, None),
        ];
        for spec in specs {
            let g = gram_matrix(&spec, 3).unwrap();
            let tol = if spec.kind == FunctionalKind::ContHalfline { 1e-5 } else { 1e-6 };
            assert!(g.off_diagonal_defect() < 1e-6, "{} {}", spec.tag(), g.off_diagonal_defect());
            assert!(g.diagonal_defect() < tol, "{} {}", spec.tag(), g.diagonal_defect());
        }
    }

    #[test]
    fn jackson_is_bilateral_at_unit_scale() {
        for alpha in [-0.5, 0.5, 2.0] {
            let jac = qlag(FunctionalKind::Jackson, alpha, 0.5, None);
            let bil = qlag(FunctionalKind::Bilateral, alpha, 0.5, Some(1.0));
            let p = QLagParams::new(alpha, qb(0.5)).unwrap();
            for n in 0..=3 {
                let l = |x: f64| q_laguerre(n, x, &p).map(real);
                let j = inner_product(&jac, l, l).unwrap();
                let b = inner_product(&bil, l, l).unwrap();
                assert!((j - b * 0.5).norm() < 1e-12 * j.norm(), "{alpha} {n} {j} {b}");
            }
        }
    }

    #[test]
    fn linear_in_each_slot() {
        let spec = ultra(0.3, 0.6);
        let f = |x: f64| Ok(c64(x * x, 0.5 - x));
        let g = |x: f64| Ok(real((3.0 * x).sin()));
        let h = |x: f64| Ok(real(1.0 + x));
        let lhs = inner_product(&spec, |x| Ok(f(x)? + g(x)?), h).unwrap();
        let rhs = inner_product(&spec, f, h).unwrap() + inner_product(&spec, g, h).unwrap();
        assert!((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()));
    }

    #[test]
    fn tags_round_trip() {
        for id in CorollaryId::ALL {
            assert_eq!(CorollaryId::from_tag(id.tag()), Some(id));
        }
        assert_eq!(CorollaryId::ALL.iter().filter(|c| c.is_flagged()).count(), 1);
        assert_eq!(CorollaryId::from_tag("C36"), None);
    }

    /// Stronger than the report's residual, which is damped by `1 + |rhs|`.
    fn relative(r: &IdentityReport) -> f64 {
        r.abs_residual / r.rhs.norm().max(1e-300)
    }

    #[test]
    fn worked_corollaries() {
        let q = qb(0.5);
        let p = ParamPoint::new(q, 0.0, 0.0).with_alpha(0.5).with_beta(0.5);
        let r = verify_corollary(C26, &p, 0, &ctx());
        let norm = qlag_continuous_norm(0, &QLagParams::new(0.5, q).unwrap()).unwrap();
        assert!(r.error.is_none() && (r.rhs.re - norm).abs() < 1e-12 * norm, "{r:?}");
        assert!(r.rel_residual < 1e-7, "{r:?}");

        let p = ParamPoint::new(q, 0.0, 0.05).with_alpha(0.5).with_beta(1.0);
        let r = verify_corollary(C33, &p, 1, &ctx());
        assert!(r.rel_residual < 1e-7 && relative(&r) < 1e-9, "{r:?}");

        let p = ParamPoint::new(q, 0.0, 0.01).with_a(0.3).with_b(0.2).with_c(0.1).with_d(0.05).with_alpha(0.25);
        let r = verify_corollary(CAw, &p, 0, &ctx());
        assert!(r.rel_residual < 1e-6 && relative(&r) < 1e-9, "{r:?}");
    }

    #[test]
    fn every_corollary_at_a_sample() {
        let q = qb(0.5);
        let mut s = 0x5eedu64;
        let mut u = move || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64
        };
        for id in CorollaryId::ALL {
            let p = sample_corollary_point(id, q, &mut u);
            assert!(corollary_in_domain(id, &p), "{} {p:?}", id.tag());
            for n in [0, 2] {
                let r = verify_corollary(id, &p, n, &ctx());
                assert!(r.error.is_none(), "{r:?}");
                assert!(relative(&r) < 1e-8, "{} n={n} {:e} {r:?}", id.tag(), relative(&r));
            }
        }
    }

    #[test]
    fn printed_c27_needs_the_binomial_power() {
        // Dropping q^{C(n,2)} from the displayed constant breaks the identity from n = 2 on.
        let q = qb(0.5);
        let p = ParamPoint::new(q, 0.0, 0.1).with_alpha(0.5).with_beta(1.3);
        for n in 0..4 {
            let r = verify_corollary(C27, &p, n, &ctx());
            assert!(relative(&r) < 1e-8, "{r:?}");
            let printed = r.rhs / q.powf(binom2(n as i64));
            assert_eq!((r.lhs - printed).norm() < 1e-8 * r.lhs.norm(), n < 2);
        }
    }

    #[test]
    fn corollaries_follow_their_theorems_at_zero_t() {
        // t = 0 leaves the n = 0 norm integral of the target family
        let q = qb(0.4);
        for id in CorollaryId::ALL {
            let mut p = sample_corollary_point(id, q, &mut { || 0.3 });
            p.t = 0.0;
            let r = verify_corollary(id, &p, 0, &ctx());
            let spec = corollary_functional(id, &p).unwrap();
            let norm = closed_form_norm(&spec, 0).unwrap();
            assert!((r.lhs.re - norm).abs() < 1e-8 * norm.abs(), "{} {r:?} {norm}", id.tag());
            assert!(relative(&r) < 1e-8, "{} {r:?}", id.tag());
        }
    }

    proptest! {
        #![proptest_config(crate::testutil::pt(12))]
        #[test]
        fn functional_is_linear(a in -2.0f64..2.0, b in -2.0f64..2.0, alpha in -0.8f64..2.5) {
            let spec = qlag(FunctionalKind::Bilateral, alpha, 0.5, Some(0.7));
            let f = |x: f64| Ok(real(1.0 / (1.0 + x)));
            let g = |x: f64| Ok(real(x));
            let lhs = inner_product(&spec, |x| Ok(f(x)? * a + g(x)? * b), one).unwrap();
            let rhs = inner_product(&spec, f, one).unwrap() * a + inner_product(&spec, g, one).unwrap() * b;
            prop_assert!((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm() + rhs.norm()));
        }
    }
}
