//! Generating functions and their one-free-parameter generalizations.
//!
//! Every identity has the shape `LHS(x, t) = sum_n lambda_n(t) p_n(x) I_n(t)`,
//! where `p_n` belongs to one of the four families and `I_n` is a basic
//! hypergeometric series (identically 1 for the source identities). The left
//! side is a closed form built from q-Pochhammer products and series; the
//! right side is summed to a truncation order that is doubled until two
//! successive partial sums agree.
//!
//! | tag | left side | target polynomial | source |
//! |---|---|---|---|
//! | T2 | `2phi1 * 2phi1` | `p_n(x; alpha,b,c,d)` | SRC_AW_14113 |
//! | T3 | `(t beta e, t beta/e)_inf / (te, t/e)_inf` | `C_n(x; gamma)` | SRC_CQU_141027 |
//! | T4 | `(t/e)_inf 2phi1` | `C_n(x; gamma)` | SRC_CQU_141029 |
//! | T5 | `2phi1 / (te)_inf` | `C_n(x; gamma)` | SRC_CQU_141028 |
//! | T6 | `(gamma te)_inf / (te)_inf 3phi2` | `C_n(x; alpha)` | SRC_CQU_141033 |
//! | T7 | `2phi1 * 2phi1` | `C_n(x; gamma)` | SRC_CQU_141031 |
//! | T8 | `2phi1 * 2phi1` | `C_n(x; gamma)` | SRC_CQU_141030 |
//! | T9 | `2phi1 * 2phi1` | `C_n(x; gamma)` | SRC_CQU_141032 |
//! | T11 | `(t)_inf / (xt)_inf 0phi1` | `p_n(x; b)` | SRC_LQL_142011 |
//! | T13 | `0phi1 / (t)_inf` | `L_n^(beta)` | SRC_QL_142114 |
//! | T14 | `(t)_inf 0phi2` | `L_n^(beta)` | SRC_QL_142115 |
//! | T15 | `(gamma t)_inf / (t)_inf 1phi2` | `L_n^(beta)` | SRC_QL_142116 |
//!
//! Here `e = e^{i theta}` with `x = cos theta`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // float methods in no_std builds
use num_traits::Float as _;
use crate::bhs::{DEFAULT_MAX_TERMS, DEFAULT_TOL, SeriesSpec, eval_phi};
use crate::polyfam::{
    AwParams, FamilyId, FamilyParams, LqlParams, QLagParams, UltraParams, askey_wilson, conjugate_closed, cont_q_ultra,
    little_q_laguerre, little_q_laguerre_scaled, q_laguerre, unit_point,
};
use crate::qpoch::{PRODUCT_TOL, QBase, binom2, poch, poch_inf, poch_many};
use crate::{C64, CompensatedSum, Error, Result, c64, real};

/// First truncation order tried by [`verify_identity`].
pub const FIRST_CHECKPOINT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(into = "&'static str", try_from = "String"))]
pub enum IdentityId {
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    T8,
    T9,
    T11,
    T13,
    T14,
    T15,
    SrcAw14113,
    SrcCqu141027,
    SrcCqu141028,
    SrcCqu141029,
    SrcCqu141030,
    SrcCqu141031,
    SrcCqu141032,
    SrcCqu141033,
    SrcLql142011,
    SrcQl142114,
    SrcQl142115,
    SrcQl142116,
}

use IdentityId::*;

impl IdentityId {
    pub const GENERALIZED: [IdentityId; 12] = [T2, T3, T4, T5, T6, T7, T8, T9, T11, T13, T14, T15];
    pub const SOURCES: [IdentityId; 12] = [
        SrcAw14113,
        SrcCqu141027,
        SrcCqu141028,
        SrcCqu141029,
        SrcCqu141030,
        SrcCqu141031,
        SrcCqu141032,
        SrcCqu141033,
        SrcLql142011,
        SrcQl142114,
        SrcQl142115,
        SrcQl142116,
    ];

    pub fn all() -> impl Iterator<Item = IdentityId> {
        Self::GENERALIZED.into_iter().chain(Self::SOURCES)
    }

    pub fn tag(self) -> &'static str {
        match self {
            T2 => "T2",
            T3 => "T3",
            T4 => "T4",
            T5 => "T5",
            T6 => "T6",
            T7 => "T7",
            T8 => "T8",
            T9 => "T9",
            T11 => "T11",
            T13 => "T13",
            T14 => "T14",
            T15 => "T15",
            SrcAw14113 => "SRC_AW_14113",
            SrcCqu141027 => "SRC_CQU_141027",
            SrcCqu141028 => "SRC_CQU_141028",
            SrcCqu141029 => "SRC_CQU_141029",
            SrcCqu141030 => "SRC_CQU_141030",
            SrcCqu141031 => "SRC_CQU_141031",
            SrcCqu141032 => "SRC_CQU_141032",
            SrcCqu141033 => "SRC_CQU_141033",
            SrcLql142011 => "SRC_LQL_142011",
            SrcQl142114 => "SRC_QL_142114",
            SrcQl142115 => "SRC_QL_142115",
            SrcQl142116 => "SRC_QL_142116",
        }
    }

    pub fn from_tag(tag: &str) -> Option<IdentityId> {
        Self::all().find(|id| id.tag() == tag)
    }

    pub fn is_source(self) -> bool {
        Self::SOURCES.contains(&self)
    }

    /// The generating function a generalized identity was built from; sources map to themselves.
    pub fn source(self) -> IdentityId {
        match self {
            T2 => SrcAw14113,
            T3 => SrcCqu141027,
            T4 => SrcCqu141029,
            T5 => SrcCqu141028,
            T6 => SrcCqu141033,
            T7 => SrcCqu141031,
            T8 => SrcCqu141030,
            T9 => SrcCqu141032,
            T11 => SrcLql142011,
            T13 => SrcQl142114,
            T14 => SrcQl142115,
            T15 => SrcQl142116,
            s => s,
        }
    }

    pub fn family(self) -> FamilyId {
        match self {
            T2 | SrcAw14113 => FamilyId::AskeyWilson,
            T11 | SrcLql142011 => FamilyId::LittleQLaguerre,
            T13 | T14 | T15 | SrcQl142114 | SrcQl142115 | SrcQl142116 => FamilyId::QLaguerre,
            _ => FamilyId::ContQUltra,
        }
    }

    /// Parameter names the identity reads from a [`ParamPoint`].
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            T2 => &["a", "b", "c", "d", "alpha"],
            SrcAw14113 => &["a", "b", "c", "d"],
            T3 | T4 | T5 | T7 | T8 | T9 => &["beta", "gamma"],
            T6 => &["alpha", "beta", "gamma"],
            SrcCqu141033 => &["beta", "gamma"],
            SrcCqu141027 | SrcCqu141028 | SrcCqu141029 | SrcCqu141030 | SrcCqu141031 | SrcCqu141032 => &["beta"],
            T11 => &["a", "b"],
            SrcLql142011 => &["a"],
            T13 | T14 => &["alpha", "beta"],
            T15 => &["alpha", "beta", "gamma"],
            SrcQl142114 | SrcQl142115 => &["alpha"],
            SrcQl142116 => &["alpha", "gamma"],
        }
    }

    /// The point with the free parameter set to the value that reduces the
    /// identity to its source; `None` for sources.
    pub fn collapse(self, p: &ParamPoint) -> Option<ParamPoint> {
        let mut out = *p;
        match self {
            T2 => out.alpha = p.a,
            T3 | T4 | T5 | T7 | T8 | T9 => out.gamma = p.beta,
            T6 => out.alpha = p.beta,
            T11 => out.b = p.a,
            T13 | T14 | T15 => out.beta = p.alpha,
            _ => return None,
        }
        Some(out)
    }
}

impl From<IdentityId> for &'static str {
    fn from(id: IdentityId) -> Self {
        id.tag()
    }
}

impl TryFrom<String> for IdentityId {
    type Error = String;

    fn try_from(s: String) -> core::result::Result<Self, String> {
        IdentityId::from_tag(&s).ok_or_else(|| format!("unknown identity tag {s}"))
    }
}

/// Named parameters of one evaluation.
///
/// Parameters a family requires to be real are stored as [`C64`] and
/// rejected when their imaginary part is not zero.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ParamPoint {
    pub q: QBase,
    pub x: f64,
    pub t: f64,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub a: Option<C64>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub b: Option<C64>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub c: Option<C64>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub d: Option<C64>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub alpha: Option<C64>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub beta: Option<C64>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub gamma: Option<C64>,
    /// Lattice scale `c` of the bilateral q-Laguerre sums.
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub scale: Option<f64>,
}

macro_rules! setters {
    ($($name:ident => $field:ident),*) => {$(
        pub fn $name(mut self, v: impl Into<C64>) -> Self {
            self.$field = Some(v.into());
            self
        }
    )*};
}

impl ParamPoint {
    pub fn new(q: QBase, x: f64, t: f64) -> Self {
        ParamPoint { q, x, t, a: None, b: None, c: None, d: None, alpha: None, beta: None, gamma: None, scale: None }
    }

    setters!(with_a => a, with_b => b, with_c => c, with_d => d, with_alpha => alpha, with_beta => beta, with_gamma => gamma);

    pub fn with_scale(mut self, c: f64) -> Self {
        self.scale = Some(c);
        self
    }

    pub fn with_t(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    pub fn get(&self, name: &'static str) -> Result<C64> {
        let v = match name {
            "a" => self.a,
            "b" => self.b,
            "c" => self.c,
            "d" => self.d,
            "alpha" => self.alpha,
            "beta" => self.beta,
            "gamma" => self.gamma,
            _ => None,
        };
        v.ok_or(Error::MissingParameter(name))
    }

    pub fn get_real(&self, name: &'static str) -> Result<f64> {
        let v = self.get(name)?;
        if v.im != 0.0 {
            return Err(Error::InvalidParameter { name, reason: "must be real" });
        }
        Ok(v.re)
    }
}

/// Numeric policy shared by every evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EvalContext {
    /// Relative stopping tolerance of every series and infinite product.
    pub tol: f64,
    /// Term cap of every series.
    pub max_terms: usize,
    /// Two successive outer partial sums closer than `outer_tol (1 + |S|)` end the escalation.
    pub outer_tol: f64,
    /// Largest outer truncation order.
    pub outer_cap: usize,
    /// Gauss–Legendre order used by the quadrature functionals.
    pub quad_order: usize,
}

impl Default for EvalContext {
    fn default() -> Self {
        EvalContext { tol: DEFAULT_TOL, max_terms: DEFAULT_MAX_TERMS, outer_tol: 1e-15, outer_cap: 4096, quad_order: 256 }
    }
}

/// Outcome of one numeric identity check.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct IdentityReport {
    pub tag: &'static str,
    pub point: ParamPoint,
    /// Degree of the corollary or the pair of degrees of a Gram entry.
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub lhs: C64,
    pub rhs: C64,
    pub abs_residual: f64,
    /// `abs_residual / (1 + max(|lhs|, |rhs|))`
    pub rel_residual: f64,
    pub n_terms_outer: usize,
    pub n_terms_inner: usize,
    pub in_domain: bool,
    /// Whether the truncation escalation stabilized before its cap.
    pub converged: bool,
    pub error: Option<String>,
}

impl IdentityReport {
    pub fn new(tag: &'static str, point: ParamPoint, lhs: C64, rhs: C64) -> Self {
        let abs_residual = (lhs - rhs).norm();
        let rel_residual = abs_residual / (1.0 + lhs.norm().max(rhs.norm()));
        IdentityReport {
            tag,
            point,
            n: None,
            m: None,
            lhs,
            rhs,
            abs_residual,
            rel_residual,
            n_terms_outer: 0,
            n_terms_inner: 0,
            in_domain: true,
            converged: true,
            error: None,
        }
    }

    pub fn failed(tag: &'static str, point: ParamPoint, err: &Error) -> Self {
        let mut r = Self::new(tag, point, real(f64::NAN), real(f64::NAN));
        r.converged = false;
        r.error = Some(err.to_string());
        r
    }

    /// No error and `rel_residual < tol`.
    pub fn passes(&self, tol: f64) -> bool {
        self.error.is_none() && self.rel_residual < tol
    }
}

/// Upper bound on `|t|` stated for the identity at these parameters.
///
/// The sources inherit the bound of their generalization with the factors
/// that involve the free parameter dropped.
pub fn t_bound(id: IdentityId, p: &ParamPoint) -> Result<f64> {
    let q = p.q.get();
    let bsq = || -> Result<f64> { Ok(1.0 - p.get_real("beta")?.powi(2)) };
    let sqrt_q_factor = || -> Result<f64> { Ok(bsq()? * (1.0 + q.sqrt() * p.get_real("beta")?.abs())) };
    let qlag = || -> Result<f64> { Ok((1.0 - p.q.powf(p.get_real("alpha")? + 1.0)) * (1.0 - q)) };
    Ok(match id {
        T2 | SrcAw14113 => (1.0 - q).powi(3),
        T3 | SrcCqu141027 => 1.0,
        T4 | T5 | T6 | SrcCqu141028 | SrcCqu141029 | SrcCqu141033 => bsq()?,
        T7 | T8 => (sqrt_q_factor()? * (1.0 - q * p.get_real("gamma")?.abs())).min(1.0),
        T9 | SrcCqu141030 | SrcCqu141031 | SrcCqu141032 => sqrt_q_factor()?.min(1.0),
        T11 | SrcLql142011 => {
            let a = p.get_real("a")?;
            ((1.0 - q) * (1.0 - a * q) / a).min(1.0)
        }
        T13 | T14 | SrcQl142114 | SrcQl142115 => qlag()?,
        T15 | SrcQl142116 => 1.0 - q,
    })
}

/// Limit of `|term_{n+1} / term_n|` for the outer sum, where it is known in
/// closed form.
///
/// For the q-Laguerre expansions with a `(t q^{alpha-beta})^n` factor and no
/// `q^{C(n,2)}` damping this is `|t| q^{alpha-beta}`. It can exceed 1 inside
/// the stated `t` bound when `beta > alpha`, and the expansion then diverges.
pub fn outer_ratio(id: IdentityId, p: &ParamPoint) -> Option<f64> {
    match id {
        T13 | T15 => {
            let shift = p.get_real("alpha").ok()? - p.get_real("beta").ok()?;
            Some(p.t.abs() * p.q.get().powf(shift))
        }
        _ => None,
    }
}

fn in_unit_punctured(v: Result<f64>) -> bool {
    matches!(v, Ok(b) if b.abs() < 1.0 && b != 0.0)
}

/// Whether the point satisfies every hypothesis of the identity.
pub fn in_domain(id: IdentityId, p: &ParamPoint) -> bool {
    let Ok(bound) = t_bound(id, p) else { return false };
    if !(p.t.abs() < bound) || !p.x.is_finite() {
        return false;
    }
    let names = id.parameters();
    if names.iter().any(|n| p.get(n).is_err()) {
        return false;
    }
    let qf = p.q.get();
    match id.family() {
        FamilyId::AskeyWilson => {
            let ps: Vec<C64> = names.iter().map(|n| p.get(n).unwrap()).collect();
            let target: Vec<C64> = ["alpha", "b", "c", "d"].iter().filter_map(|n| p.get(n).ok()).collect();
            p.x.abs() <= 1.0
                && ps.iter().all(|v| v.norm() < 1.0)
                && conjugate_closed(&ps[..4])
                && (id != T2 || (target.len() == 4 && conjugate_closed(&target) && p.alpha != Some(real(0.0))))
        }
        FamilyId::ContQUltra => {
            p.x.abs() <= 1.0
                && names.iter().all(|&n| match (id, n) {
                    (T6 | SrcCqu141033, "gamma") => p.get(n).map(|g| g.is_finite()).unwrap_or(false),
                    _ => in_unit_punctured(p.get_real(n)),
                })
        }
        FamilyId::LittleQLaguerre => {
            names.iter().all(|&n| matches!(p.get_real(n), Ok(v) if v > 0.0 && v * qf < 1.0))
        }
        FamilyId::QLaguerre => names.iter().all(|&n| match n {
            "gamma" => p.get(n).map(|g| g.is_finite()).unwrap_or(false),
            _ => matches!(p.get_real(n), Ok(v) if v > -1.0 && v.is_finite()),
        }),
    }
}

/// Concrete values needed by both sides of one identity.
struct Resolved {
    id: IdentityId,
    q: QBase,
    x: f64,
    t: f64,
    e: C64,
    a: C64,
    b: C64,
    c: C64,
    d: C64,
    alpha: C64,
    beta: C64,
    gamma: C64,
    target: FamilyParams,
}

impl Resolved {
    fn new(id: IdentityId, p: &ParamPoint) -> Result<Self> {
        let q = p.q;
        let opt = |v: Option<C64>| v.unwrap_or(real(0.0));
        for n in id.parameters() {
            p.get(n)?;
        }
        let e = if id.family() == FamilyId::AskeyWilson || id.family() == FamilyId::ContQUltra {
            if !(p.x.abs() <= 1.0) {
                return Err(Error::InvalidParameter { name: "x", reason: "must lie in [-1, 1]" });
            }
            unit_point(p.x)
        } else {
            real(0.0)
        };
        // Out-of-domain points are still evaluated, so targets skip validation.
        let target = match id {
            T2 => FamilyParams::AskeyWilson(AwParams::new(p.get("alpha")?, p.get("b")?, p.get("c")?, p.get("d")?, q)),
            SrcAw14113 => FamilyParams::AskeyWilson(AwParams::new(p.get("a")?, p.get("b")?, p.get("c")?, p.get("d")?, q)),
            T3 | T4 | T5 | T7 | T8 | T9 => FamilyParams::ContQUltra(UltraParams { beta: p.get_real("gamma")?, base: q }),
            T6 => FamilyParams::ContQUltra(UltraParams { beta: p.get_real("alpha")?, base: q }),
            T11 => FamilyParams::LittleQLaguerre(LqlParams { a: p.get_real("b")?, base: q }),
            SrcLql142011 => FamilyParams::LittleQLaguerre(LqlParams { a: p.get_real("a")?, base: q }),
            T13 | T14 | T15 => FamilyParams::QLaguerre(QLagParams { alpha: p.get_real("beta")?, base: q }),
            SrcQl142114 | SrcQl142115 | SrcQl142116 => {
                FamilyParams::QLaguerre(QLagParams { alpha: p.get_real("alpha")?, base: q })
            }
            _ => FamilyParams::ContQUltra(UltraParams { beta: p.get_real("beta")?, base: q }),
        };
        if id.family() == FamilyId::ContQUltra {
            p.get_real("beta")?;
        }
        Ok(Resolved {
            id,
            q,
            x: p.x,
            t: p.t,
            e,
            a: opt(p.a),
            b: opt(p.b),
            c: opt(p.c),
            d: opt(p.d),
            alpha: opt(p.alpha),
            beta: opt(p.beta),
            gamma: opt(p.gamma),
            target,
        })
    }

    fn poly(&self, n: usize) -> Result<C64> {
        match &self.target {
            FamilyParams::AskeyWilson(p) => askey_wilson(n, self.x, p),
            FamilyParams::ContQUltra(p) => cont_q_ultra(n, self.x, p).map(real),
            FamilyParams::LittleQLaguerre(p) => little_q_laguerre(n, self.x, p).map(real),
            FamilyParams::QLaguerre(p) => q_laguerre(n, self.x, p).map(real),
        }
    }

    /// `q^{C(n,2)} p_n(x)` for the little q-Laguerre targets.
    fn lql_scaled(&self, n: usize) -> Result<f64> {
        match &self.target {
            FamilyParams::LittleQLaguerre(p) => little_q_laguerre_scaled(n, self.x, p),
            _ => unreachable!("little q-Laguerre identities only"),
        }
    }

    fn qpow(&self, s: f64) -> C64 {
        real(self.q.powf(s))
    }

    fn beta_re(&self) -> f64 {
        self.beta.re
    }

    /// `beta q^{n/2}, -beta q^{n/2}, beta q^{(n+1)/2}, -beta q^{(n+1)/2}`.
    fn four(&self, n: usize) -> [C64; 4] {
        let h0 = self.beta * self.q.powf(n as f64 / 2.0);
        let h1 = self.beta * self.q.powf((n as f64 + 1.0) / 2.0);
        [h0, -h0, h1, -h1]
    }

    /// `(beta q^m)^{1/2}` from the single principal root of `beta`.
    fn root(&self, m: f64) -> C64 {
        self.beta.sqrt() * self.q.powf(m / 2.0)
    }
}

struct Series<'a> {
    ctx: &'a EvalContext,
    q: QBase,
    terms: usize,
}

impl Series<'_> {
    fn phi(&mut self, num: &[C64], den: &[C64], z: C64) -> Result<C64> {
        let r = eval_phi(&SeriesSpec::new(num, den, z, self.q), self.ctx.tol, self.ctx.max_terms)?;
        self.terms = self.terms.max(r.terms_used);
        Ok(r.value)
    }

    fn inf(&self, a: C64) -> Result<C64> {
        poch_inf(a, self.q, self.ctx.tol.max(PRODUCT_TOL))
    }
}

fn lhs_with(r: &Resolved, s: &mut Series) -> Result<C64> {
    let (t, e, q) = (r.t, r.e, r.q);
    let tc = real(t);
    let ei = e.conj();
    let te = tc * e;
    let tei = tc * ei;
    let beta = r.beta;
    let sq = real(q.get().sqrt());
    let cqu_pair = |s: &mut Series| s.phi(&[beta, beta * e * e], &[beta * beta], tei);
    Ok(match r.id {
        T2 | SrcAw14113 => {
            let (a, b, c, d) = (r.a, r.b, r.c, r.d);
            s.phi(&[a * e, b * e], &[a * b], tei)? * s.phi(&[c * ei, d * ei], &[c * d], te)?
        }
        T3 | SrcCqu141027 => {
            s.inf(te * beta)? * s.inf(tei * beta)? / (s.inf(te)? * s.inf(tei)?)
        }
        T4 | SrcCqu141029 => s.inf(tei)? * cqu_pair(s)?,
        T5 | SrcCqu141028 => cqu_pair(s)? / s.inf(te)?,
        T6 | SrcCqu141033 => {
            let g = r.gamma;
            s.inf(g * te)? / s.inf(te)? * s.phi(&[g, beta, beta * e * e], &[beta * beta, g * te], tei)?
        }
        T7 | SrcCqu141031 => {
            let (rb, rqb) = (r.root(0.0), r.root(1.0));
            s.phi(&[rb * e, -rb * e], &[-beta], tei)? * s.phi(&[rqb * ei, -rqb * ei], &[-beta * q.get()], te)?
        }
        T8 | SrcCqu141030 => {
            let (rb, rqb) = (r.root(0.0), r.root(1.0));
            s.phi(&[rb * e, rqb * e], &[beta * sq], tei)? * s.phi(&[-rb * ei, -rqb * ei], &[beta * sq], te)?
        }
        T9 | SrcCqu141032 => {
            let (rb, rqb) = (r.root(0.0), r.root(1.0));
            s.phi(&[rb * e, -rqb * e], &[-beta * sq], tei)? * s.phi(&[rqb * ei, -rb * ei], &[-beta * sq], te)?
        }
        T11 | SrcLql142011 => {
            let aq = r.a * q.get();
            s.inf(tc)? / s.inf(tc * r.x)? * s.phi(&[], &[aq], aq * r.x * t)?
        }
        T13 | SrcQl142114 => {
            let qa = r.qpow(r.alpha.re + 1.0);
            s.phi(&[], &[qa], -qa * r.x * t)? / s.inf(tc)?
        }
        T14 | SrcQl142115 => {
            let qa = r.qpow(r.alpha.re + 1.0);
            s.inf(tc)? * s.phi(&[], &[qa, tc], -qa * r.x * t)?
        }
        T15 | SrcQl142116 => {
            let qa = r.qpow(r.alpha.re + 1.0);
            let g = r.gamma;
            s.inf(g * t)? / s.inf(tc)? * s.phi(&[g], &[qa, g * t], -qa * r.x * t)?
        }
    })
}

/// `(-1)^k` for `C64` products.
fn sign(k: usize) -> f64 {
    if k.is_multiple_of(2) { 1.0 } else { -1.0 }
}

fn ratio(num: &[C64], den: &[C64], q: QBase, n: usize) -> Result<C64> {
    let d = poch_many(den, q, n);
    if d == real(0.0) {
        return Err(Error::DegenerateDenominator("outer coefficient"));
    }
    Ok(poch_many(num, q, n) / d)
}

/// Coefficient of `C_n(x; g)` in the Rogers generalizations, less its inner series.
fn cqu_coefficient(r: &Resolved, g: f64, num: &[C64], den: &[C64], n: usize) -> Result<C64> {
    let q = r.q;
    let mut den: Vec<C64> = den.to_vec();
    den.push(real(q.get() * g));
    let norm = (1.0 - g * q.powi(n as i64)) / (1.0 - g);
    Ok(ratio(num, &den, q, n)? * norm * r.t.powi(n as i32))
}

fn rhs_term_with(r: &Resolved, s: &mut Series, n: usize) -> Result<C64> {
    let q = r.q;
    let qf = q.get();
    let t = r.t;
    let tn = t.powi(n as i32);
    let beta = r.beta;
    let sq = qf.sqrt();
    let poly = || r.poly(n);
    let src = |lambda: C64| -> Result<C64> { Ok(lambda * tn * poly()?) };
    Ok(match r.id {
        SrcAw14113 => src(real(1.0) / poch_many(&[real(qf), r.a * r.b, r.c * r.d], q, n))?,
        SrcCqu141027 => src(real(1.0))?,
        SrcCqu141028 => src(real(1.0) / poch(beta * beta, q, n))?,
        SrcCqu141029 => src(sign(n) * q.powf(binom2(n as i64)) * beta.powi(n as i32) / poch(beta * beta, q, n))?,
        SrcCqu141033 => src(poch(r.gamma, q, n) / poch(beta * beta, q, n))?,
        SrcCqu141031 => src(ratio(&[beta * sq, -beta * sq], &[beta * beta, -beta * qf], q, n)?)?,
        SrcCqu141030 => src(ratio(&[-beta, -beta * sq], &[beta * beta, beta * sq], q, n)?)?,
        SrcCqu141032 => src(ratio(&[-beta, beta * sq], &[beta * beta, -beta * sq], q, n)?)?,
        SrcLql142011 => real(sign(n) * tn / poch(real(qf), q, n).re * r.lql_scaled(n)?),
        SrcQl142114 => src(real(1.0) / poch(r.qpow(r.alpha.re + 1.0), q, n))?,
        SrcQl142115 => src(sign(n) * q.powf(binom2(n as i64)) / poch(r.qpow(r.alpha.re + 1.0), q, n))?,
        SrcQl142116 => src(poch(r.gamma, q, n) / poch(r.qpow(r.alpha.re + 1.0), q, n))?,
        T2 => {
            let (a, b, c, d, al) = (r.a, r.b, r.c, r.d, r.alpha);
            let big_a = a * b * c * d;
            let big_b = al * b * c * d;
            let (ra, raq) = (big_a.sqrt(), (big_a / qf).sqrt());
            let (rb, rbq) = (big_b.sqrt(), (big_b / qf).sqrt());
            let coef = ratio(
                &[big_b / qf, raq, -raq, ra, -ra],
                &[real(qf), a * b, c * d, big_a / qf, rbq, -rbq, rb, -rb],
                q,
                n,
            )?;
            coef * tn * poly()? * inner_with(r, s, n)?
        }
        T3 => cqu_coefficient(r, r.gamma.re, &[beta], &[], n)? * poly()? * inner_with(r, s, n)?,
        T4 => {
            let extra = sign(n) * q.powf(binom2(n as i64)) * beta.powi(n as i32);
            let coef = cqu_coefficient(r, r.gamma.re, &[beta], &[beta * beta], n)? * extra;
            coef * poly()? * inner_with(r, s, n)?
        }
        T5 => cqu_coefficient(r, r.gamma.re, &[beta], &[beta * beta], n)? * poly()? * inner_with(r, s, n)?,
        T6 => cqu_coefficient(r, r.alpha.re, &[beta, r.gamma], &[beta * beta], n)? * poly()? * inner_with(r, s, n)?,
        T7 | T8 | T9 => {
            let (num, den_extra): (&[C64], &[C64]) = match r.id {
                T7 => (&[beta, beta * sq, -beta * sq], &[beta * beta, -beta * qf]),
                T8 => (&[beta, -beta, -beta * sq], &[beta * beta, beta * sq]),
                _ => (&[beta, -beta, beta * sq], &[beta * beta, -beta * sq]),
            };
            cqu_coefficient(r, r.gamma.re, num, den_extra, n)? * poly()? * inner_with(r, s, n)?
        }
        T11 => {
            let (a, b) = (r.a, r.b);
            let coef = sign(n) * poch(b * qf, q, n) / poch_many(&[real(qf), a * qf], q, n);
            coef * tn * r.lql_scaled(n)? * inner_with(r, s, n)?
        }
        T13 | T14 | T15 => {
            let shift = q.powf(r.alpha.re - r.beta_re());
            let lead = poch(r.qpow(r.alpha.re + 1.0), q, n);
            let coef = match r.id {
                T13 => real((shift * t).powi(n as i32)),
                T14 => real((-shift * t).powi(n as i32) * q.powf(binom2(n as i64))),
                _ => poch(r.gamma, q, n) * (shift * t).powi(n as i32),
            };
            coef / lead * poly()? * inner_with(r, s, n)?
        }
    })
}

/// The `r phi s` factor of the degree-`n` coefficient; 1 for the sources.
fn inner_with(r: &Resolved, s: &mut Series, n: usize) -> Result<C64> {
    let q = r.q;
    let qf = q.get();
    let t = r.t;
    let qn = q.powi(n as i64);
    let beta = r.beta;
    let i = c64(0.0, 1.0);
    if r.id.is_source() {
        return Ok(real(1.0));
    }
    match r.id {
        T2 => {
            let (a, b, c, d, al) = (r.a, r.b, r.c, r.d, r.alpha);
            let big_a = a * b * c * d;
            let big_b = al * b * c * d;
            s.phi(
                &[a / al, b * c * qn, b * d * qn, big_a * q.powi(2 * n as i64 - 1)],
                &[a * b * qn, big_a * q.powi(n as i64 - 1), big_b * q.powi(2 * n as i64)],
                al * t,
            )
        }
        T3 => {
            let g = r.gamma;
            s.phi(&[beta / g, beta * qn], &[g * qn * qf], g * t * t)
        }
        T4 => {
            let g = r.gamma;
            let mut den = vec![g * qn * qf];
            den.extend(r.four(n));
            let z = g * (beta * t).powi(2) * qn * qn * qf;
            s.phi(&[beta / g, beta * qn], &den, z)
        }
        T5 => {
            let g = r.gamma;
            let mut den = vec![g * qn * qf];
            den.extend(r.four(n));
            let zero = real(0.0);
            s.phi(&[beta / g, beta * qn, zero, zero, zero, zero], &den, g * t * t)
        }
        T6 => {
            let (al, g) = (r.alpha, r.gamma);
            let (g0, g1) = (g.sqrt() * q.powf(n as f64 / 2.0), g.sqrt() * q.powf((n as f64 + 1.0) / 2.0));
            let mut den = vec![al * qn * qf];
            den.extend(r.four(n));
            s.phi(&[beta / al, beta * qn, g0, -g0, g1, -g1], &den, al * t * t)
        }
        T7 | T8 | T9 => {
            let g = r.gamma;
            let m = n as f64;
            let (h0, h1) = (r.root(m + 0.5), r.root(m + 1.5));
            let mut top = vec![beta / g, beta * qn];
            let mut bottom = vec![g * qn * qf];
            bottom.extend(r.four(n));
            let pm = |v: C64| [v, -v];
            let pmi = |v: C64| [i * v, -i * v];
            match r.id {
                T7 => {
                    for v in [h0, h1] {
                        top.extend(pm(v));
                    }
                    for v in [h0, h1] {
                        top.extend(pmi(v));
                    }
                    bottom.extend(pmi(r.root(m + 1.0)));
                    bottom.extend(pmi(r.root(m + 2.0)));
                }
                T8 => {
                    for v in [r.root(m), r.root(m + 1.0), h0, h1] {
                        top.extend(pmi(v));
                    }
                    bottom.extend(pm(h0));
                    bottom.extend(pm(h1));
                }
                _ => {
                    top.extend(pmi(r.root(m)));
                    top.extend(pmi(r.root(m + 1.0)));
                    top.extend(pm(h0));
                    top.extend(pm(h1));
                    bottom.extend(pmi(h0));
                    bottom.extend(pmi(h1));
                }
            }
            s.phi(&top, &bottom, g * t * t)
        }
        T11 => {
            let (a, b) = (r.a, r.b);
            s.phi(&[a / b], &[a * qn * qf], b * qn * qf * t)
        }
        T13 | T14 | T15 => {
            let (al, be) = (r.alpha.re, r.beta_re());
            let shift = real(q.powf(al - be));
            let top = r.qpow(al + n as f64 + 1.0);
            match r.id {
                T13 => s.phi(&[shift, real(0.0)], &[top], real(t)),
                T14 => s.phi(&[shift], &[top], real(t * qn)),
                _ => s.phi(&[shift, r.gamma * qn], &[top], real(t)),
            }
        }
        _ => unreachable!("sources handled above"),
    }
}

/// The inner `r phi s` of the degree-`n` coefficient and the number of terms
/// it took; `(1, 0)` for a source.
pub fn inner_series(id: IdentityId, point: &ParamPoint, ctx: &EvalContext, n: usize) -> Result<(C64, usize)> {
    let r = Resolved::new(id, point)?;
    let mut s = Series { ctx, q: point.q, terms: 0 };
    let v = inner_with(&r, &mut s, n)?;
    Ok((v, s.terms))
}

/// Closed-form left side.
pub fn eval_lhs(id: IdentityId, point: &ParamPoint, ctx: &EvalContext) -> Result<C64> {
    let r = Resolved::new(id, point)?;
    lhs_with(&r, &mut Series { ctx, q: point.q, terms: 0 })
}

/// Right side truncated after the term of degree `n_outer`.
///
/// Fails with [`Error::InsufficientTruncation`] when the first omitted term
/// exceeds `ctx.outer_tol` times the partial sum.
pub fn eval_rhs(id: IdentityId, point: &ParamPoint, ctx: &EvalContext, n_outer: usize) -> Result<C64> {
    let r = Resolved::new(id, point)?;
    let mut s = Series { ctx, q: point.q, terms: 0 };
    let mut acc = CompensatedSum::new();
    for n in 0..=n_outer {
        acc.add(finite(rhs_term_with(&r, &mut s, n)?, n)?);
    }
    let next = finite(rhs_term_with(&r, &mut s, n_outer + 1)?, n_outer + 1)?;
    let sum = acc.value();
    if next.norm() > ctx.outer_tol * sum.norm() {
        return Err(Error::InsufficientTruncation { n_outer });
    }
    Ok(sum)
}

fn finite(v: C64, n: usize) -> Result<C64> {
    if v.norm() < f64::MAX { Ok(v) } else { Err(Error::OuterDivergence { n }) }
}

/// Both sides with the truncation escalated over 16, 32, 64, ... up to `ctx.outer_cap`.
pub fn verify_identity(id: IdentityId, point: &ParamPoint, ctx: &EvalContext) -> IdentityReport {
    match verify_inner(id, point, ctx) {
        Ok(r) => r,
        Err(e) => {
            let mut r = IdentityReport::failed(id.tag(), *point, &e);
            r.in_domain = in_domain(id, point);
            r
        }
    }
}

fn verify_inner(id: IdentityId, point: &ParamPoint, ctx: &EvalContext) -> Result<IdentityReport> {
    let r = Resolved::new(id, point)?;
    let mut s = Series { ctx, q: point.q, terms: 0 };
    let lhs = lhs_with(&r, &mut s)?;
    let (rhs, n_outer, converged) = escalate(ctx, |n| rhs_term_with(&r, &mut s, n))?;
    let mut rep = IdentityReport::new(id.tag(), *point, lhs, rhs);
    rep.n_terms_outer = n_outer;
    rep.n_terms_inner = s.terms;
    rep.in_domain = in_domain(id, point);
    rep.converged = converged;
    Ok(rep)
}

/// Sums `term(0), term(1), ...`, comparing partial sums at orders 16, 32, ...
///
/// Returns the last partial sum, its order, and whether two successive
/// checkpoints agreed to `ctx.outer_tol (1 + |S|)`. A term that overflows
/// is reported as [`Error::OuterDivergence`].
pub(crate) fn escalate(ctx: &EvalContext, mut term: impl FnMut(usize) -> Result<C64>) -> Result<(C64, usize, bool)> {
    let mut acc = CompensatedSum::new();
    let mut n = 0;
    let mut checkpoint = FIRST_CHECKPOINT.min(ctx.outer_cap);
    let mut prev: Option<C64> = None;
    loop {
        while n <= checkpoint {
            acc.add(finite(term(n)?, n)?);
            n += 1;
        }
        let sum = acc.value();
        if let Some(p) = prev {
            if (sum - p).norm() <= ctx.outer_tol * (1.0 + sum.norm()) {
                return Ok((sum, checkpoint, true));
            }
        }
        if checkpoint >= ctx.outer_cap {
            return Ok((sum, checkpoint, false));
        }
        prev = Some(sum);
        checkpoint = (checkpoint * 2).min(ctx.outer_cap);
    }
}

/// [`verify_identity`] restricted to the source generating functions.
pub fn verify_source(id: IdentityId, point: &ParamPoint, ctx: &EvalContext) -> IdentityReport {
    if !id.is_source() {
        let e = Error::InvalidParameter { name: "id", reason: "not a source identity" };
        return IdentityReport::failed(id.tag(), *point, &e);
    }
    verify_identity(id, point, ctx)
}

/// Draws a point inside the identity's domain with `|t| <= 0.9` times its
/// bound; `u` yields independent uniforms on [0, 1).
pub fn sample_point(id: IdentityId, q: QBase, u: &mut impl FnMut() -> f64) -> ParamPoint {
    let mut signed = |lo: f64, hi: f64| {
        let v = lo + (hi - lo) * u();
        if u() < 0.5 { -v } else { v }
    };
    let qf = q.get();
    let mut p = match id.family() {
        FamilyId::AskeyWilson => {
            let mut p = ParamPoint::new(q, 0.0, 0.0)
                .with_a(signed(0.05, 0.6))
                .with_b(signed(0.05, 0.6))
                .with_alpha(signed(0.05, 0.6));
            let r = signed(0.05, 0.6).abs();
            let phi = signed(0.0, core::f64::consts::PI);
            if phi.abs() > core::f64::consts::FRAC_PI_2 {
                let c = C64::from_polar(r, phi);
                p = p.with_c(c).with_d(c.conj());
            } else {
                p = p.with_c(signed(0.05, 0.6)).with_d(r);
            }
            p.x = signed(0.0, 1.0);
            p
        }
        FamilyId::ContQUltra => {
            let mut p = ParamPoint::new(q, signed(0.0, 1.0), 0.0).with_beta(signed(0.05, 0.9));
            match id {
                T6 | SrcCqu141033 => {
                    let r = signed(0.0, 0.9).abs();
                    let phi = signed(0.0, core::f64::consts::PI);
                    p = p.with_gamma(C64::from_polar(r, phi)).with_alpha(signed(0.05, 0.9));
                }
                _ => p = p.with_gamma(signed(0.05, 0.9)),
            }
            p
        }
        FamilyId::LittleQLaguerre => {
            let hi = 0.95 / qf;
            let mut draw = || 0.05 + (hi - 0.05) * u();
            let (a, b) = (draw(), draw());
            let mut p = ParamPoint::new(q, 0.0, 0.0).with_a(a).with_b(b);
            p.x = u();
            p
        }
        FamilyId::QLaguerre => {
            let mut draw = || -0.9 + 3.9 * u();
            let (al, be) = (draw(), draw());
            let r = 0.9 * u();
            let phi = core::f64::consts::TAU * u();
            let mut p = ParamPoint::new(q, 4.0 * u(), 0.0).with_alpha(al).with_beta(be);
            p = p.with_gamma(C64::from_polar(r, phi));
            p
        }
    };
    let bound = t_bound(id, &p).unwrap_or(0.0);
    p.t = 0.9 * bound * (2.0 * u() - 1.0);
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::vec::Vec;

    fn qb(q: f64) -> QBase {
        QBase::new(q).unwrap()
    }

    fn ctx() -> EvalContext {
        EvalContext::default()
    }

    /// A deterministic stream of uniforms for sampling.
    fn uniforms(seed: u64) -> impl FnMut() -> f64 {
        let mut s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
        move || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64
        }
    }

    fn base_point(id: IdentityId) -> ParamPoint {
        let q = qb(0.5);
        let p = ParamPoint::new(q, 0.3, 0.0);
        match id.family() {
            FamilyId::AskeyWilson => p.with_a(0.3).with_b(0.2).with_c(0.1).with_d(0.05).with_alpha(0.25),
            FamilyId::ContQUltra => p.with_beta(0.5).with_gamma(0.3).with_alpha(0.3),
            FamilyId::LittleQLaguerre => p.with_a(0.6).with_b(1.2),
            FamilyId::QLaguerre => p.with_alpha(0.7).with_beta(1.6).with_gamma(c64(0.3, 0.4)),
        }
    }

    #[test]
    fn tags_round_trip() {
        assert_eq!(IdentityId::all().count(), 24);
        for id in IdentityId::all() {
            assert_eq!(IdentityId::from_tag(id.tag()), Some(id));
            assert!(id.source().is_source());
            assert_eq!(id.source().family(), id.family());
        }
        assert_eq!(IdentityId::from_tag("T10"), None);
    }

    #[test]
    fn trivial_at_zero_t() {
        for id in IdentityId::all() {
            let p = base_point(id);
            let l = eval_lhs(id, &p, &ctx()).unwrap();
            assert_eq!(l, real(1.0), "{}", id.tag());
            for n_outer in [0, 1, 5] {
                let r = eval_rhs(id, &p, &ctx(), n_outer).unwrap();
                assert!((r - 1.0).norm() < 1e-15, "{} {r}", id.tag());
            }
            assert!(verify_identity(id, &p, &ctx()).rel_residual < 1e-14);
        }
    }

    #[test]
    fn thin_truncation_rejected() {
        let p = base_point(T3).with_t(0.5);
        assert!(matches!(eval_rhs(T3, &p, &ctx(), 2), Err(Error::InsufficientTruncation { n_outer: 2 })));
    }

    #[test]
    fn aw_lhs_double_series() {
        // Direct double sum of the two 2phi1 series at theta = 0.
        let q = 0.5f64;
        let (a, b, c, d, t): (f64, f64, f64, f64, f64) = (0.3, 0.2, 0.1, 0.05, 0.05);
        let p = |v: f64, k: usize| (0..k).map(|j| 1.0 - v * q.powi(j as i32)).product::<f64>();
        let mut want = 0.0;
        for j in 0..60 {
            for k in 0..60 {
                want += p(a, j) * p(b, j) / (p(q, j) * p(a * b, j)) * t.powi(j as i32)
                    * p(c, k) * p(d, k) / (p(q, k) * p(c * d, k)) * t.powi(k as i32);
            }
        }
        let pt = ParamPoint::new(qb(q), 1.0, t).with_a(a).with_b(b).with_c(c).with_d(d).with_alpha(0.2);
        let got = eval_lhs(T2, &pt, &ctx()).unwrap();
        assert!((got - want).norm() < 1e-10);
    }

    #[test]
    fn worked_examples() {
        let q = qb(0.5);
        let p = ParamPoint::new(q, 0.2, 0.1).with_beta(0.3).with_gamma(0.5);
        assert!(verify_identity(T4, &p, &ctx()).rel_residual < 1e-8);
        let t = 0.2 * (1.0 - 0.09) * (1.0 + 0.5f64.sqrt() * 0.3);
        let p = ParamPoint::new(q, 0.7, t).with_beta(0.3).with_gamma(0.4);
        assert!(in_domain(T9, &p));
        assert!(verify_identity(T9, &p, &ctx()).rel_residual < 1e-8);
        let p = ParamPoint::new(q, 0.3, 0.2).with_beta(0.5);
        assert!(verify_source(SrcCqu141027, &p, &ctx()).rel_residual < 1e-9);
        let p = ParamPoint::new(q, 1.0, 0.1).with_alpha(0.5);
        assert!(verify_source(SrcQl142114, &p, &ctx()).rel_residual < 1e-9);
        assert!(verify_source(T3, &p, &ctx()).error.is_some());
    }

    #[test]
    fn complex_gamma() {
        let q = qb(0.5);
        let g = c64(0.3, 0.4);
        let p = ParamPoint::new(q, 0.3, 0.1).with_alpha(0.3).with_beta(0.5).with_gamma(g);
        let rep = verify_identity(T6, &p, &ctx());
        assert!(rep.in_domain && rep.rel_residual < 1e-10, "{rep:?}");
        let p = ParamPoint::new(q, 0.8, 0.2).with_alpha(0.7).with_beta(1.6).with_gamma(g);
        let rep = verify_identity(T15, &p, &ctx());
        assert!(rep.in_domain && rep.rel_residual < 1e-10, "{rep:?}");
    }

    #[test]
    fn negative_beta_stays_real() {
        for id in [T7, T8, T9] {
            let p = ParamPoint::new(qb(0.5), 0.4, 0.08).with_beta(-0.4).with_gamma(0.3);
            let rep = verify_identity(id, &p, &ctx());
            assert!(rep.rel_residual < 1e-10, "{rep:?}");
            assert!(rep.rhs.im.abs() < 1e-9 && rep.lhs.im.abs() < 1e-9);
        }
    }

    #[test]
    fn collapse_matches_source() {
        for id in IdentityId::GENERALIZED {
            let p = base_point(id).with_t(0.05);
            let c = id.collapse(&p).unwrap();
            let gen = verify_identity(id, &c, &ctx());
            let src = verify_source(id.source(), &c, &ctx());
            let scale = 1.0 + src.rhs.norm();
            assert!((gen.lhs - src.lhs).norm() < 1e-12 * scale, "{}", id.tag());
            assert!((gen.rhs - src.rhs).norm() < 1e-12 * scale, "{} {} {}", id.tag(), gen.rhs, src.rhs);
        }
        assert!(SrcAw14113.collapse(&base_point(SrcAw14113)).is_none());
    }

    #[test]
    fn domain_bounds() {
        let q = qb(0.5);
        let p = ParamPoint::new(q, 0.0, 0.0).with_beta(0.5).with_gamma(0.5);
        assert_eq!(t_bound(T3, &p).unwrap(), 1.0);
        assert_eq!(t_bound(T4, &p).unwrap(), 0.75);
        let want = (0.75 * (1.0 + 0.5f64.sqrt() * 0.5) * 0.75f64).min(1.0);
        assert_eq!(t_bound(T7, &p).unwrap(), want);
        assert_eq!(t_bound(T2, &p).unwrap(), 0.125);
        assert!(!in_domain(T3, &p.with_t(1.0)));
        assert!(!in_domain(T3, &p.with_beta(0.0).with_t(0.1)));
        let p = ParamPoint::new(q, 2.0, 0.1).with_alpha(0.5);
        assert!((t_bound(T13, &p.with_beta(0.0)).unwrap() - (1.0 - 0.5f64.powf(1.5)) * 0.5).abs() < 1e-15);
        assert!(!in_domain(T13, &p));
        assert!(in_domain(T13, &p.with_beta(0.0)));
        assert!(!in_domain(T13, &p.with_beta(-1.5)));
    }

    #[test]
    fn truncation_monotone_along_ray() {
        // Residual at a fixed truncation does not grow as |t| shrinks, above round-off.
        let p = base_point(T3);
        let mut last = f64::INFINITY;
        for t in [0.8, 0.4, 0.2, 0.1, 0.05] {
            let p = p.with_t(t);
            let l = eval_lhs(T3, &p, &ctx()).unwrap();
            let r = Resolved::new(T3, &p).unwrap();
            let mut s = Series { ctx: &ctx(), q: p.q, terms: 0 };
            let sum: C64 = (0..=20).map(|n| rhs_term_with(&r, &mut s, n).unwrap()).sum();
            let res = (l - sum).norm();
            assert!(res <= last * (1.0 + 1e-9) + 1e-14, "t={t} {res:e}");
            last = res;
        }
    }

    #[test]
    fn sampled_points_in_domain() {
        let mut u = uniforms(7);
        for id in IdentityId::all() {
            for q in [0.2, 0.5, 0.8] {
                let p = sample_point(id, qb(q), &mut u);
                assert!(in_domain(id, &p), "{} {p:?}", id.tag());
            }
        }
    }

    proptest! {
        #![proptest_config(crate::testutil::pt(24))]
        #[test]
        fn generalized_identities_hold(idx in 0usize..12, q in 0.2f64..0.8, seed in any::<u64>()) {
            let id = IdentityId::GENERALIZED[idx];
            let p = sample_point(id, qb(q), &mut uniforms(seed));
            prop_assume!(outer_ratio(id, &p).is_none_or(|r| r < 0.9));
            let rep = verify_identity(id, &p, &ctx());
            prop_assert!(rep.passes(1e-7), "{:?}", rep);
        }

        #[test]
        fn sources_hold(idx in 0usize..12, q in 0.2f64..0.8, seed in any::<u64>()) {
            let id = IdentityId::SOURCES[idx];
            let p = sample_point(id, qb(q), &mut uniforms(seed));
            let rep = verify_source(id, &p, &ctx());
            prop_assert!(rep.passes(1e-8), "{:?}", rep);
        }
    }

    #[test]
    fn stated_bound_admits_divergence() {
        // beta > alpha pushes |t| q^{alpha-beta} past 1 while |t| is still in bound.
        let p = ParamPoint::new(qb(0.2), 3.8, 0.6).with_alpha(0.38).with_beta(1.05).with_gamma(c64(0.05, 0.0));
        for id in [T13, T15] {
            let p = if id == T15 { p.with_t(0.5) } else { p };
            assert!(in_domain(id, &p), "{}", id.tag());
            assert!(outer_ratio(id, &p).unwrap() > 1.0);
            let rep = verify_identity(id, &p, &ctx());
            assert!(matches!(eval_rhs(id, &p, &ctx(), 4000), Err(Error::OuterDivergence { .. })));
            assert!(rep.error.is_some() && !rep.converged, "{rep:?}");
        }
        // The q^{C(n,2)} factor keeps the middle expansion convergent.
        assert!(outer_ratio(T14, &p).is_none());
        assert!(verify_identity(T14, &p.with_t(0.1), &ctx()).passes(1e-9));
    }

    #[test]
    fn report_fields_consistent() {
        let p = base_point(T13).with_t(0.1);
        let rep = verify_identity(T13, &p, &ctx());
        let want = rep.abs_residual / (1.0 + rep.lhs.norm().max(rep.rhs.norm()));
        assert_eq!(rep.rel_residual, want);
        assert!(rep.converged && rep.n_terms_outer >= FIRST_CHECKPOINT && rep.n_terms_inner > 0);
        let v: Vec<&str> = IdentityId::all().map(|i| i.tag()).collect();
        assert_eq!(v.len(), 24);
    }
}
