//! Polynomial families, orthogonality weights and norm constants.
//!
//! | family | defining series | evaluation route |
//! |---|---|---|
//! | Askey–Wilson `p_n(x;a,b,c,d\|q)` | `a^-n (ab,ac,ad)_n 4phi3` | three-term recurrence |
//! | Rogers `C_n(x;beta\|q)` | `(beta)_n/(q)_n e^{in theta} 2phi1` | series for `n <= 30`, recurrence above |
//! | little q-Laguerre `p_n(x;a\|q)` | `2phi1(q^-n, 0; aq; q, qx)` | cleared `2phi0` form |
//! | q-Laguerre `L_n^(alpha)(x;q)` | `(q^{alpha+1})_n/(q)_n 1phi1` | series |
//!
//! The Askey–Wilson series suffers cancellation of order `q^{-n^2/2}`, so the
//! recurrence is the implementation and the series an oracle. The
//! little q-Laguerre `2phi1` cancels badly at the lattice points `q^k`; its
//! `2phi0` companion does not.

use core::f64::consts::PI;

#[allow(unused_imports)] // float methods in no_std builds
use num_traits::Float as _;
use crate::bhs::{DEFAULT_MAX_TERMS, DEFAULT_TOL, SeriesSpec, eval_phi, phi};
use crate::qpoch::{PRODUCT_TOL, QBase, binom2, poch, poch_inf, poch_inf_many, poch_many, poch_qpow, poch_qpow_inf};
use crate::{C64, Error, Result, c64, real};

/// Series cutoff above which the Rogers polynomials switch to the recurrence.
pub const CQU_SERIES_MAX_N: usize = 30;

/// Distance to an integer below which the sine-reflection norm is refused.
pub const NEAR_INTEGER_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "SCREAMING_SNAKE_CASE"))]
pub enum FamilyId {
    AskeyWilson,
    ContQUltra,
    LittleQLaguerre,
    QLaguerre,
}

impl FamilyId {
    pub const ALL: [FamilyId; 4] =
        [FamilyId::AskeyWilson, FamilyId::ContQUltra, FamilyId::LittleQLaguerre, FamilyId::QLaguerre];

    pub fn tag(self) -> &'static str {
        match self {
            FamilyId::AskeyWilson => "ASKEY_WILSON",
            FamilyId::ContQUltra => "CONT_Q_ULTRA",
            FamilyId::LittleQLaguerre => "LITTLE_Q_LAGUERRE",
            FamilyId::QLaguerre => "Q_LAGUERRE",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AwParams {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
    pub base: QBase,
}

impl AwParams {
    pub fn new(a: C64, b: C64, c: C64, d: C64, base: QBase) -> Self {
        AwParams { a, b, c, d, base }
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64, base: QBase) -> Self {
        Self::new(real(a), real(b), real(c), real(d), base)
    }

    pub fn params(&self) -> [C64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Parameters real or closed under conjugation, all of modulus below 1.
    pub fn check_orthogonality(&self) -> Result<()> {
        let ps = self.params();
        if ps.iter().any(|p| !(p.norm() < 1.0)) {
            return Err(Error::InvalidParameter { name: "a,b,c,d", reason: "moduli must be below 1" });
        }
        if !conjugate_closed(&ps) {
            return Err(Error::InvalidParameter { name: "a,b,c,d", reason: "must be real or conjugate pairs" });
        }
        Ok(())
    }
}

/// Whether the multiset is invariant under complex conjugation.
pub(crate) fn conjugate_closed(ps: &[C64]) -> bool {
    let tol = 1e-14;
    let mut used = [false; 8];
    for (i, p) in ps.iter().enumerate() {
        if p.im.abs() <= tol * (1.0 + p.norm()) {
            continue;
        }
        if used[i] {
            continue;
        }
        let partner = ps.iter().enumerate().position(|(j, r)| {
            j != i && !used[j] && (r - p.conj()).norm() <= tol * (1.0 + p.norm())
        });
        match partner {
            Some(j) => {
                used[i] = true;
                used[j] = true;
            }
            None => return false,
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UltraParams {
    pub beta: f64,
    pub base: QBase,
}

impl UltraParams {
    /// Requires `beta` in (-1, 1) without 0.
    pub fn new(beta: f64, base: QBase) -> Result<Self> {
        if !(beta.abs() < 1.0) || beta == 0.0 {
            return Err(Error::InvalidParameter { name: "beta", reason: "must lie in (-1, 1) without 0" });
        }
        Ok(UltraParams { beta, base })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LqlParams {
    pub a: f64,
    pub base: QBase,
}

impl LqlParams {
    /// Requires `0 < aq < 1`.
    pub fn new(a: f64, base: QBase) -> Result<Self> {
        if !(a > 0.0 && a * base.get() < 1.0) {
            return Err(Error::InvalidParameter { name: "a", reason: "must lie in (0, 1/q)" });
        }
        Ok(LqlParams { a, base })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QLagParams {
    pub alpha: f64,
    pub base: QBase,
}

impl QLagParams {
    /// Requires `alpha > -1`.
    pub fn new(alpha: f64, base: QBase) -> Result<Self> {
        if !(alpha > -1.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter { name: "alpha", reason: "must exceed -1" });
        }
        Ok(QLagParams { alpha, base })
    }
}

/// Parameters of any one family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyParams {
    AskeyWilson(AwParams),
    ContQUltra(UltraParams),
    LittleQLaguerre(LqlParams),
    QLaguerre(QLagParams),
}

impl FamilyParams {
    pub fn family(&self) -> FamilyId {
        match self {
            FamilyParams::AskeyWilson(_) => FamilyId::AskeyWilson,
            FamilyParams::ContQUltra(_) => FamilyId::ContQUltra,
            FamilyParams::LittleQLaguerre(_) => FamilyId::LittleQLaguerre,
            FamilyParams::QLaguerre(_) => FamilyId::QLaguerre,
        }
    }

    pub fn base(&self) -> QBase {
        match self {
            FamilyParams::AskeyWilson(p) => p.base,
            FamilyParams::ContQUltra(p) => p.base,
            FamilyParams::LittleQLaguerre(p) => p.base,
            FamilyParams::QLaguerre(p) => p.base,
        }
    }

    /// Degree-`n` polynomial at `x`.
    pub fn eval(&self, n: usize, x: f64) -> Result<C64> {
        match self {
            FamilyParams::AskeyWilson(p) => askey_wilson(n, x, p),
            FamilyParams::ContQUltra(p) => cont_q_ultra(n, x, p).map(real),
            FamilyParams::LittleQLaguerre(p) => little_q_laguerre(n, x, p).map(real),
            FamilyParams::QLaguerre(p) => q_laguerre(n, x, p).map(real),
        }
    }
}

fn check_unit_interval(x: f64) -> Result<()> {
    if x.abs() <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name: "x", reason: "must lie in [-1, 1]" })
    }
}

/// `e^{i theta}` with `x = cos theta`, `theta` in [0, pi].
pub fn unit_point(x: f64) -> C64 {
    let s = (1.0 - x * x).max(0.0).sqrt();
    c64(x, s)
}

/// Askey–Wilson polynomial by the three-term recurrence.
///
/// The pivot parameter (the one playing the role of `a` in the recurrence
/// coefficients) is the one of largest modulus; the polynomial is symmetric in
/// its four parameters.
pub fn askey_wilson(n: usize, x: f64, p: &AwParams) -> Result<C64> {
    check_unit_interval(x)?;
    if p.a == real(0.0) {
        return Err(Error::ZeroParameter("a"));
    }
    Ok(askey_wilson_sequence(n, x, p)?[n])
}

/// `p_0, ..., p_nmax` at one point.
pub fn askey_wilson_sequence(nmax: usize, x: f64, p: &AwParams) -> Result<alloc::vec::Vec<C64>> {
    let mut ps = p.params();
    let piv = (0..4).max_by(|&i, &j| ps[i].norm().total_cmp(&ps[j].norm())).unwrap_or(0);
    ps.swap(0, piv);
    let [a, b, c, d] = ps;
    if a == real(0.0) {
        return Err(Error::ZeroParameter("a"));
    }
    let q = p.base;
    let s = a * b * c * d;
    let one = real(1.0);
    let mut out = alloc::vec::Vec::with_capacity(nmax + 1);
    out.push(one);
    let (mut prev, mut cur) = (real(0.0), one);
    for m in 0..nmax {
        let qm = q.powi(m as i64);
        let qm1 = q.powi(m as i64 - 1);
        let r = if m == 0 { one } else { (one - s * qm1) / (one - s * q.powi(2 * m as i64 - 1)) };
        let d2m = one - s * q.powi(2 * m as i64);
        let up = r / d2m;
        let big_a = (one - a * b * qm) * (one - a * c * qm) * (one - a * d * qm) * r / (a * d2m);
        let (big_c, down) = if m == 0 {
            (real(0.0), real(0.0))
        } else {
            let den = (one - s * q.powi(2 * m as i64 - 2)) * (one - s * q.powi(2 * m as i64 - 1));
            let pairs = (one - b * c * qm1) * (one - b * d * qm1) * (one - c * d * qm1);
            let cc = a * (1.0 - qm) * pairs / den;
            let dn = (1.0 - qm) * (one - a * b * qm1) * (one - a * c * qm1) * (one - a * d * qm1) * pairs / den;
            (cc, dn)
        };
        let bb = a + one / a - big_a - big_c;
        let next = ((real(2.0 * x) - bb) * cur - down * prev) / up;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    Ok(out)
}

/// Askey–Wilson polynomial straight from its `4phi3` definition.
///
/// Accurate only for small `n`; used as an oracle for [`askey_wilson`].
pub fn askey_wilson_series(n: usize, x: f64, p: &AwParams) -> Result<C64> {
    check_unit_interval(x)?;
    let AwParams { a, b, c, d, base: q } = *p;
    if a == real(0.0) {
        return Err(Error::ZeroParameter("a"));
    }
    let e = unit_point(x);
    let ni = n as i64;
    let num = [real(q.powi(-ni)), a * b * c * d * q.powi(ni - 1), a * e, a / e];
    let den = [a * b, a * c, a * d];
    let pre = poch_many(&den, q, n) / a.powi(n as i32);
    Ok(pre * phi(&num, &den, real(q.get()), q)?)
}

/// Rogers (continuous q-ultraspherical) polynomial `C_n(x;beta|q)`.
pub fn cont_q_ultra(n: usize, x: f64, p: &UltraParams) -> Result<f64> {
    check_unit_interval(x)?;
    if n > CQU_SERIES_MAX_N || p.beta == 0.0 {
        return Ok(cont_q_ultra_recurrence(n, x, p.beta, p.base));
    }
    let q = p.base;
    let beta = p.beta;
    let e = unit_point(x);
    let ni = n as i64;
    let num = [real(q.powi(-ni)), real(beta)];
    let den = [real(q.powi(1 - ni) / beta)];
    let z = real(q.get() / beta) / (e * e);
    let pre = poch(real(beta), q, n) / poch(real(q.get()), q, n) * e.powi(n as i32);
    let spec = SeriesSpec::new(&num, &den, z, q);
    Ok((pre * eval_phi(&spec, DEFAULT_TOL, DEFAULT_MAX_TERMS)?.value).re)
}

/// `C_n(x;beta|q)` by its three-term recurrence.
pub fn cont_q_ultra_recurrence(n: usize, x: f64, beta: f64, q: QBase) -> f64 {
    let qf = q.get();
    if n == 0 {
        return 1.0;
    }
    let (mut c0, mut c1) = (1.0, 2.0 * x * (1.0 - beta) / (1.0 - qf));
    for m in 1..n {
        let qm = q.powi(m as i64);
        let c2 = (2.0 * x * (1.0 - beta * qm) * c1 - (1.0 - beta * beta * qm / qf) * c0) / (1.0 - qm * qf);
        c0 = c1;
        c1 = c2;
    }
    c1
}

/// Little q-Laguerre polynomial via the cleared `2phi0` form; see [`little_q_laguerre_scaled`].
pub fn little_q_laguerre(n: usize, x: f64, p: &LqlParams) -> Result<f64> {
    Ok(little_q_laguerre_scaled(n, x, p)? * p.base.powf(-binom2(n as i64)))
}

/// `q^{C(n,2)} p_n(x;a|q)`, which stays finite where `p_n` itself overflows.
///
/// The `2phi0` form with its prefactor `1/(q^-n/a;q)_n` expanded reads
/// `(-1)^n/(aq;q)_n sum_k [n,k]_q prod_{j<k}(x - q^j) (a q^n)^{n-k}`
/// after multiplying by `q^{C(n,2)}`; every factor is bounded.
pub fn little_q_laguerre_scaled(n: usize, x: f64, p: &LqlParams) -> Result<f64> {
    let q = p.base;
    let a = p.a;
    if a == 0.0 {
        return Err(Error::ZeroParameter("a"));
    }
    let lq = q.ln();
    let one_minus = |s: f64| -(s * lq).exp_m1();
    let lead = poch(real(a * q.get()), q, n).re;
    if lead.abs() < crate::qpoch::DENOMINATOR_GUARD {
        return Err(Error::DegenerateDenominator("(aq;q)_n"));
    }
    let aqn = a * q.powi(n as i64);
    let mut binom = 1.0;
    let mut prefix = 1.0;
    let mut acc = crate::CompensatedSum::new();
    for k in 0..=n {
        acc.add(real(binom * prefix * aqn.powi((n - k) as i32)));
        if k == n {
            break;
        }
        binom *= one_minus((n - k) as f64) / one_minus(k as f64 + 1.0);
        prefix *= x - q.powi(k as i64);
    }
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * acc.value().re / lead)
}

/// Little q-Laguerre polynomial from `2phi1(q^-n, 0; aq; q, qx)`.
pub fn little_q_laguerre_2phi1(n: usize, x: f64, p: &LqlParams) -> Result<f64> {
    let q = p.base;
    let num = [real(q.powi(-(n as i64))), real(0.0)];
    let den = [real(p.a * q.get())];
    Ok(phi(&num, &den, real(q.get() * x), q)?.re)
}

/// q-Laguerre polynomial `(q^{alpha+1})_n/(q)_n 1phi1(q^-n; q^{alpha+1}; q, -q^{n+alpha+1} x)`.
///
/// Summed in the cleared form `sum_k (-1)^k (q^{n-k+1})_k q^{k^2 + alpha k} x^k / (q^{alpha+1}, q)_k`,
/// which never forms `q^-n`.
pub fn q_laguerre(n: usize, x: f64, p: &QLagParams) -> Result<f64> {
    let q = p.base;
    let al = p.alpha;
    let lq = q.ln();
    let one_minus = |s: f64| -(s * lq).exp_m1();
    let pre = poch_qpow(al + 1.0, q, n) / poch_qpow(1.0, q, n);
    let mut term = 1.0;
    let mut acc = crate::CompensatedSum::new();
    acc.add(real(term));
    for k in 0..n {
        let kf = k as f64;
        let ratio = -one_minus((n - k) as f64) * q.powf(2.0 * kf + 1.0 + al) * x
            / (one_minus(al + 1.0 + kf) * one_minus(kf + 1.0));
        term *= ratio;
        if term == 0.0 {
            break;
        }
        acc.add(real(term));
    }
    Ok(pre * acc.value().re)
}

/// q-Laguerre polynomial from `2phi1(q^-n, -x; 0; q, q^{n+alpha+1}) / (q;q)_n`.
pub fn q_laguerre_2phi1(n: usize, x: f64, p: &QLagParams) -> Result<f64> {
    let q = p.base;
    let num = [real(q.powi(-(n as i64))), real(-x)];
    let den = [real(0.0)];
    let z = real(q.powf(n as f64 + p.alpha + 1.0));
    Ok(phi(&num, &den, z, q)?.re / poch_qpow(1.0, q, n))
}

/// Askey–Wilson weight `|(e^{2i theta})_inf / (a e^{i theta}, ..., d e^{i theta})_inf|^2`.
///
/// Vanishes at `|x| = 1`.
pub fn aw_weight(x: f64, p: &AwParams, tol: f64) -> Result<f64> {
    check_unit_interval(x)?;
    if x.abs() == 1.0 {
        return Ok(0.0);
    }
    let q = p.base;
    let e = unit_point(x);
    let num = poch_inf(e * e, q, tol)?;
    let den = poch_inf_many(&[p.a * e, p.b * e, p.c * e, p.d * e], q, tol)?;
    Ok((num / den).norm_sqr())
}

/// Rogers weight `|(e^{2i theta})_inf / (beta e^{2i theta})_inf|^2`; any `|beta| < 1`.
pub fn ultra_weight(x: f64, p: &UltraParams, tol: f64) -> Result<f64> {
    check_unit_interval(x)?;
    if x.abs() == 1.0 {
        return Ok(0.0);
    }
    let q = p.base;
    let e2 = unit_point(x).powi(2);
    Ok((poch_inf(e2, q, tol)? / poch_inf(e2 * p.beta, q, tol)?).norm_sqr())
}

/// `h_n`: the Askey–Wilson orthogonality integral equals `2 pi h_n`.
pub fn aw_norm(n: usize, p: &AwParams, tol: f64) -> Result<f64> {
    let AwParams { a, b, c, d, base: q } = *p;
    let qn = q.powi(n as i64);
    let s = a * b * c * d;
    let num = poch_inf(s * q.powi(2 * n as i64), q, tol)? * poch(s * q.powi(n as i64 - 1), q, n);
    let den = poch_inf_many(
        &[real(qn * q.get()), a * b * qn, a * c * qn, a * d * qn, b * c * qn, b * d * qn, c * d * qn],
        q,
        tol,
    )?;
    Ok((num / den).re)
}

/// Rogers orthogonality constant, `2 pi` included.
pub fn ultra_norm(n: usize, p: &UltraParams) -> Result<f64> {
    let q = p.base;
    let b = p.beta;
    let qf = q.get();
    let inf = |a: f64| poch_inf(real(a), q, PRODUCT_TOL).map(|v| v.re);
    let num = 2.0 * PI * (1.0 - b) * inf(b)? * inf(qf * b)? * poch(real(b * b), q, n).re;
    let den = (1.0 - b * q.powi(n as i64)) * inf(b * b)? * inf(qf)? * poch_qpow(1.0, q, n);
    Ok(num / den)
}

/// Little q-Laguerre lattice norm `(aq)^n (q)_n / ((aq)_inf (aq)_n)`.
pub fn lql_norm(n: usize, p: &LqlParams) -> Result<f64> {
    let q = p.base;
    let aq = p.a * q.get();
    let num = aq.powi(n as i32) * poch_qpow(1.0, q, n);
    Ok(num / (poch_inf(real(aq), q, PRODUCT_TOL)?.re * poch(real(aq), q, n).re))
}

/// q-Laguerre norm on the lattice `c q^k`, `k` in Z.
pub fn qlag_bilateral_norm(n: usize, p: &QLagParams, c: f64) -> Result<f64> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidParameter { name: "c", reason: "must be positive" });
    }
    let q = p.base;
    let al = p.alpha;
    let qa1 = q.powf(al + 1.0);
    let inf = |a: f64| poch_inf(real(a), q, PRODUCT_TOL).map(|v| v.re);
    let num = inf(q.get())? * inf(-c * qa1)? * inf(-q.powf(-al) / c)? * poch_qpow(al + 1.0, q, n);
    let den = q.powi(n as i64) * poch_qpow_inf(al + 1.0, q, PRODUCT_TOL)? * inf(-c)? * inf(-q.get() / c)? * poch_qpow(1.0, q, n);
    Ok(num / den)
}

/// q-Laguerre norm for the Jackson q-integral on (0, inf).
pub fn qlag_jackson_norm(n: usize, p: &QLagParams) -> Result<f64> {
    let q = p.base;
    let al = p.alpha;
    let qf = q.get();
    let inf = |a: f64| poch_inf(real(a), q, PRODUCT_TOL).map(|v| v.re);
    let num = (1.0 - qf) * inf(qf)? * inf(-q.powf(al + 1.0))? * inf(-q.powf(-al))? * poch_qpow(al + 1.0, q, n);
    let mq = inf(-qf)?;
    let den = 2.0 * q.powi(n as i64) * poch_qpow_inf(al + 1.0, q, PRODUCT_TOL)? * mq * mq * poch_qpow(1.0, q, n);
    Ok(num / den)
}

/// Integer `k` with `alpha = k` exactly, if `alpha` is a nonnegative integer.
fn exact_integer(alpha: f64) -> Option<u32> {
    (alpha >= 0.0 && alpha.fract() == 0.0 && alpha < u32::MAX as f64).then_some(alpha as u32)
}

/// The braced factor of the continuous q-Laguerre orthogonality; the norm is
/// `-brace / q^n`.
///
/// Non-integer `alpha` uses `pi (q^-alpha)_inf (q^{alpha+1})_n / (sin(pi alpha) (q)_inf (q)_n)`;
/// integer `alpha` uses `(q^{n+1})_alpha ln q / q^{alpha(alpha+1)/2}`.
pub fn qlag_continuous_brace(n: usize, p: &QLagParams) -> Result<f64> {
    let al = p.alpha;
    if exact_integer(al).is_none() {
        let k = al.round();
        if k >= 0.0 && (al - k).abs() < NEAR_INTEGER_GUARD {
            return Err(Error::NearIntegerAlpha(al));
        }
    }
    qlag_continuous_brace_unguarded(n, p)
}

/// [`qlag_continuous_brace`] without the near-integer refusal.
pub fn qlag_continuous_brace_unguarded(n: usize, p: &QLagParams) -> Result<f64> {
    let q = p.base;
    let al = p.alpha;
    if let Some(k) = exact_integer(al) {
        let pk = poch_qpow(n as f64 + 1.0, q, k as usize);
        let kf = k as f64;
        return Ok(pk * q.ln() / q.powf(kf * (kf + 1.0) * 0.5));
    }
    let k = al.round();
    // sin(pi alpha) = (-1)^k sin(pi (alpha - k))
    let sign = if (k as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let sin = sign * (PI * (al - k)).sin();
    let num = PI * poch_qpow_inf(-al, q, PRODUCT_TOL)? * poch_qpow(al + 1.0, q, n);
    let den = sin * poch_qpow_inf(1.0, q, PRODUCT_TOL)? * poch_qpow(1.0, q, n);
    Ok(num / den)
}

/// Continuous q-Laguerre norm on (0, inf) with weight `x^alpha / (-x;q)_inf`.
pub fn qlag_continuous_norm(n: usize, p: &QLagParams) -> Result<f64> {
    Ok(-qlag_continuous_brace(n, p)? / p.base.powi(n as i64))
}

/// [`qlag_continuous_norm`] without the near-integer refusal.
pub fn qlag_continuous_norm_unguarded(n: usize, p: &QLagParams) -> Result<f64> {
    Ok(-qlag_continuous_brace_unguarded(n, p)? / p.base.powi(n as i64))
}
