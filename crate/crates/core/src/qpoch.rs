//! q-Pochhammer symbols, q-numbers and q-factorials.
//!
//! Also hosts numeric checks for the classical Pochhammer identities and for
//! the four inequalities of the lemma bounding ratios of Pochhammer symbols by
//! powers of q-numbers.


#[allow(unused_imports)] // float methods in no_std builds
use num_traits::Float as _;
use crate::{C64, Error, Result, real};

/// Default truncation tolerance for infinite products.
pub const PRODUCT_TOL: f64 = 1e-17;

/// Modulus below which a Pochhammer value is treated as an exact zero divisor.
pub const DENOMINATOR_GUARD: f64 = 1e-300;

/// A base `q` in the open interval (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "f64", into = "f64"))]
pub struct QBase(f64);

impl QBase {
    pub fn new(q: f64) -> Result<Self> {
        if q.is_finite() && q > 0.0 && q < 1.0 {
            Ok(QBase(q))
        } else {
            Err(Error::InvalidBase(q))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// `ln q`, always negative.
    #[inline]
    pub fn ln(self) -> f64 {
        self.0.ln()
    }

    /// `q^k` for integer `k`.
    #[inline]
    pub fn powi(self, k: i64) -> f64 {
        if k >= i32::MIN as i64 && k <= i32::MAX as i64 {
            self.0.powi(k as i32)
        } else {
            (k as f64 * self.ln()).exp()
        }
    }

    /// `q^s` for real `s`.
    #[inline]
    pub fn powf(self, s: f64) -> f64 {
        (s * self.ln()).exp()
    }

    /// `q^z = exp(z ln q)` on the principal branch.
    #[inline]
    pub fn powc(self, z: C64) -> C64 {
        (z * self.ln()).exp()
    }
}

impl TryFrom<f64> for QBase {
    type Error = Error;
    fn try_from(q: f64) -> Result<Self> {
        QBase::new(q)
    }
}

impl From<QBase> for f64 {
    fn from(q: QBase) -> f64 {
        q.0
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}

/// `e^w - 1` without cancellation for small `w`.
pub(crate) fn cexpm1(w: C64) -> C64 {
    let (s, c) = (w.im.sin(), w.im.cos());
    let em1 = w.re.exp_m1();
    // e^{re}(cos + i sin) - 1 = em1*(cos + i sin) + (cos - 1) + i sin
    let cm1 = -2.0 * (0.5 * w.im).sin().powi(2);
    C64::new(em1 * c + cm1, em1 * s + s)
}

/// Finite symbol `(a;q)_n`.
pub fn poch(a: C64, q: QBase, n: usize) -> C64 {
    let mut p = real(1.0);
    let mut qj = 1.0;
    for _ in 0..n {
        p *= real(1.0) - a * qj;
        qj *= q.get();
    }
    p
}

/// Product of finite symbols `(a_1, ..., a_m; q)_n`.
pub fn poch_many(args: &[C64], q: QBase, n: usize) -> C64 {
    args.iter().map(|&a| poch(a, q, n)).product()
}

/// Largest index `M` with `|a| q^{M+1} / (1 - q) >= 0.25 tol`, i.e. the last
/// factor the infinite product must include.
fn truncation_index(modulus: f64, q: QBase, tol: f64) -> usize {
    if modulus == 0.0 {
        return 0;
    }
    let target = 0.25 * tol * (1.0 - q.get()) / modulus;
    if target >= 1.0 {
        return 0;
    }
    // q^{M+1} < target  <=>  M + 1 > ln(target)/ln(q)
    let m1 = (target.ln() / q.ln()).floor() as usize + 1;
    m1.saturating_sub(1)
}

/// Infinite symbol `(a;q)_inf`, truncated where the geometric tail bound
/// `|a| q^{M+1}/(1-q)` drops below `0.25 tol`.
pub fn poch_inf(a: C64, q: QBase, tol: f64) -> Result<C64> {
    check_tol(tol)?;
    let m = truncation_index(a.norm(), q, tol);
    if a == real(0.0) {
        return Ok(real(1.0));
    }
    Ok(poch(a, q, m + 1))
}

/// Product of infinite symbols `(a_1, ..., a_m; q)_inf`.
pub fn poch_inf_many(args: &[C64], q: QBase, tol: f64) -> Result<C64> {
    let mut p = real(1.0);
    for &a in args {
        p *= poch_inf(a, q, tol)?;
    }
    Ok(p)
}

/// `(q^s;q)_n` for real `s`, each factor formed as `-expm1((s+j) ln q)` so
/// factors near zero keep full relative accuracy.
pub fn poch_qpow(s: f64, q: QBase, n: usize) -> f64 {
    let lq = q.ln();
    (0..n).map(|j| -((s + j as f64) * lq).exp_m1()).product()
}

/// `(q^s;q)_inf` for real `s`, with the same factor accuracy as [`poch_qpow`].
pub fn poch_qpow_inf(s: f64, q: QBase, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let m = truncation_index(q.powf(s), q, tol);
    Ok(poch_qpow(s, q, m + 1))
}

/// `ln (-x;q)_inf` for `x >= 0`, summed as logarithms so large `x` cannot
/// overflow.
pub fn ln_poch_neg_inf(x: f64, q: QBase, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    if !(x >= 0.0) {
        return Err(Error::InvalidParameter { name: "x", reason: "must be nonnegative" });
    }
    let m = truncation_index(x, q, tol);
    let mut s = 0.0;
    let mut y = x;
    for _ in 0..=m {
        s += y.ln_1p();
        y *= q.get();
    }
    Ok(s)
}

/// q-number `[z]_q = (1 - q^z)/(1 - q)`.
pub fn q_number(z: C64, q: QBase) -> C64 {
    -cexpm1(z * q.ln()) / (1.0 - q.get())
}

/// Real q-number `[x]_q`.
pub fn q_number_re(x: f64, q: QBase) -> f64 {
    -(x * q.ln()).exp_m1() / (1.0 - q.get())
}

/// `[n]_q! = [1]_q [2]_q ... [n]_q`.
pub fn q_factorial(n: usize, q: QBase) -> f64 {
    (1..=n).map(|k| q_number_re(k as f64, q)).product()
}

/// `C(n, 2)` as a float exponent.
#[inline]
pub(crate) fn binom2(n: i64) -> f64 {
    (n as f64) * (n as f64 - 1.0) * 0.5
}

fn guard(v: C64, what: &'static str) -> Result<C64> {
    if v.norm() < DENOMINATOR_GUARD {
        Err(Error::DegenerateDenominator(what))
    } else {
        Ok(v)
    }
}

/// The classical Pochhammer identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PochIdentity {
    /// `(a;q)_{n+k} = (a;q)_k (aq^k;q)_n = (a;q)_n (aq^n;q)_k`
    Add,
    /// `(aq^n;q)_k = (a;q)_k (aq^k;q)_n / (a;q)_n`
    ShiftUp,
    /// `(aq^-n;q)_n = (-a)^n q^{-n-C(n,2)} (q/a;q)_n`
    NegShiftN,
    /// `(aq^-n;q)_k = q^{-nk} (q/a;q)_n (a;q)_k / (q^{1-k}/a;q)_n`
    NegShiftK,
    /// `(a;q)_{2n} = (a, aq; q^2)_n`
    Double,
    /// `(a^2;q^2)_n = (a, -a; q)_n`
    Square,
    /// `(aq^n;q)_n = (sqrt a, -sqrt a, sqrt(aq), -sqrt(aq); q)_n / (a;q)_n`
    MidProduct,
    /// `(-a^2;q^2)_n = (ia, -ia; q)_n`
    NegSquare,
}

impl PochIdentity {
    pub const ALL: [PochIdentity; 8] = [
        PochIdentity::Add,
        PochIdentity::ShiftUp,
        PochIdentity::NegShiftN,
        PochIdentity::NegShiftK,
        PochIdentity::Double,
        PochIdentity::Square,
        PochIdentity::MidProduct,
        PochIdentity::NegSquare,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            PochIdentity::Add => "ADD",
            PochIdentity::ShiftUp => "SHIFT_UP",
            PochIdentity::NegShiftN => "NEG_SHIFT_N",
            PochIdentity::NegShiftK => "NEG_SHIFT_K",
            PochIdentity::Double => "DOUBLE",
            PochIdentity::Square => "SQUARE",
            PochIdentity::MidProduct => "MIDPRODUCT",
            PochIdentity::NegSquare => "NEG_SQUARE",
        }
    }
}

/// Residual of a Pochhammer identity, scaled as `|L - R| / max(1, |L|, |R|)`.
///
/// Square roots come from one principal root; the `-` partner is its negation.
pub fn check_poch_identity(id: PochIdentity, a: C64, q: QBase, n: usize, k: usize) -> Result<f64> {
    let qf = q.get();
    let (l, r) = match id {
        PochIdentity::Add => {
            let l = poch(a, q, n + k);
            let r1 = poch(a, q, k) * poch(a * q.powi(k as i64), q, n);
            let r2 = poch(a, q, n) * poch(a * q.powi(n as i64), q, k);
            let scale = l.norm().max(r1.norm()).max(r2.norm()).max(1.0);
            return Ok((l - r1).norm().max((l - r2).norm()) / scale);
        }
        PochIdentity::ShiftUp => {
            let den = guard(poch(a, q, n), "(a;q)_n")?;
            (poch(a * q.powi(n as i64), q, k), poch(a, q, k) * poch(a * q.powi(k as i64), q, n) / den)
        }
        PochIdentity::NegShiftN => {
            if a == real(0.0) {
                return Err(Error::ZeroParameter("a"));
            }
            let ni = n as i64;
            let pow = q.powf(-(ni as f64) - binom2(ni));
            let sign = (-a).powi(n as i32);
            (poch(a * q.powi(-ni), q, n), sign * pow * poch(real(qf) / a, q, n))
        }
        PochIdentity::NegShiftK => {
            if a == real(0.0) {
                return Err(Error::ZeroParameter("a"));
            }
            let (ni, ki) = (n as i64, k as i64);
            let den = guard(poch(q.powi(1 - ki) / a, q, n), "(q^{1-k}/a;q)_n")?;
            let r = q.powi(-ni * ki) * poch(real(qf) / a, q, n) / den * poch(a, q, k);
            (poch(a * q.powi(-ni), q, k), r)
        }
        PochIdentity::Double => {
            let q2 = QBase(qf * qf);
            (poch(a, q, 2 * n), poch(a, q2, n) * poch(a * qf, q2, n))
        }
        PochIdentity::Square => {
            let q2 = QBase(qf * qf);
            (poch(a * a, q2, n), poch(a, q, n) * poch(-a, q, n))
        }
        PochIdentity::MidProduct => {
            let den = guard(poch(a, q, n), "(a;q)_n")?;
            let s = a.sqrt();
            let sq = (a * qf).sqrt();
            (poch(a * q.powi(n as i64), q, n), poch_many(&[s, -s, sq, -sq], q, n) / den)
        }
        PochIdentity::NegSquare => {
            let q2 = QBase(qf * qf);
            let ia = C64::i() * a;
            (poch(-(a * a), q2, n), poch(ia, q, n) * poch(-ia, q, n))
        }
    };
    Ok((l - r).norm() / l.norm().max(r.norm()).max(1.0))
}

/// Inputs for the four Pochhammer-ratio inequalities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lemma1Case {
    /// `|(q^u;q)_j| / (1-q)^j >= [Re u]_q [j-1]_q!` for `j >= 1`, `Re u > 0`.
    LowerBound { u: C64, j: usize },
    /// `|(q^u;q)_n / (q;q)_n| <= |[1+n]_q^u|` for `Re u > 0`.
    RatioBound { u: C64, n: usize },
    /// `|(q^{v+k};q)_n / (q^{u+k};q)_n| <= [n+1]_q^{v+1} / [Re u]_q`.
    ShiftedRatio { u: C64, v: f64, k: usize, n: usize },
    /// `|(q^{z+k};q)_{n-k}| / (1-q)^{n-k} <= [n]_q!/[k]_q! [1+n]_q^{|z|}` for `k <= n`.
    Truncated { z: C64, k: usize, n: usize },
}

impl Lemma1Case {
    pub fn which(&self) -> u8 {
        match self {
            Lemma1Case::LowerBound { .. } => 1,
            Lemma1Case::RatioBound { .. } => 2,
            Lemma1Case::ShiftedRatio { .. } => 3,
            Lemma1Case::Truncated { .. } => 4,
        }
    }
}

/// Margin of one inequality, positive when it holds.
///
/// The margin is `(bound - quantity) / max(1, bound)` for upper bounds and
/// `(quantity - bound) / max(1, bound)` for the lower bound. Complex
/// quantities enter through their modulus.
pub fn check_lemma1(case: Lemma1Case, q: QBase) -> Result<f64> {
    let qf = q.get();
    let pow_u = |u: C64, k: usize| q.powc(u + k as f64);
    let (quantity, bound, lower) = match case {
        Lemma1Case::LowerBound { u, j } => {
            if j == 0 {
                return Err(Error::PreconditionViolation("j must be at least 1"));
            }
            if !(u.re > 0.0) {
                return Err(Error::PreconditionViolation("Re u must be positive"));
            }
            let lhs = poch(pow_u(u, 0), q, j).norm() / (1.0 - qf).powi(j as i32);
            (lhs, q_number_re(u.re, q) * q_factorial(j - 1, q), true)
        }
        Lemma1Case::RatioBound { u, n } => {
            if !(u.re > 0.0) {
                return Err(Error::PreconditionViolation("Re u must be positive"));
            }
            let lhs = (poch(pow_u(u, 0), q, n) / poch(real(qf), q, n)).norm();
            let base = q_number_re(1.0 + n as f64, q);
            (lhs, base.powf(u.re), false)
        }
        Lemma1Case::ShiftedRatio { u, v, k, n } => {
            if !(u.re > 0.0) {
                return Err(Error::PreconditionViolation("Re u must be positive"));
            }
            if !(v >= 0.0) {
                return Err(Error::PreconditionViolation("v must be nonnegative"));
            }
            let num = poch(real(q.powf(v + k as f64)), q, n);
            let den = guard(poch(pow_u(u, k), q, n), "(q^{u+k};q)_n")?;
            let bound = q_number_re(n as f64 + 1.0, q).powf(v + 1.0) / q_number_re(u.re, q);
            ((num / den).norm(), bound, false)
        }
        Lemma1Case::Truncated { z, k, n } => {
            if k > n {
                return Err(Error::PreconditionViolation("k must not exceed n"));
            }
            let m = n - k;
            let lhs = poch(pow_u(z, k), q, m).norm() / (1.0 - qf).powi(m as i32);
            let bound = q_factorial(n, q) / q_factorial(k, q) * q_number_re(1.0 + n as f64, q).powf(z.norm());
            (lhs, bound, false)
        }
    };
    let scale = bound.abs().max(1.0);
    Ok(if lower { (quantity - bound) / scale } else { (bound - quantity) / scale })
}
