//! The basic hypergeometric series `r phi s`.
//!
//! Terms follow the ratio recurrence
//! `t_{k+1}/t_k = prod(1 - a_i q^k) / prod(1 - b_j q^k) / (1 - q^{k+1}) * (-q^k)^{1+s-r} * z`.
//! A numerator parameter equal to `q^-n` ends the sum after exactly `n + 1`
//! terms; otherwise summation stops after three consecutive terms below
//! `tol * |sum|`.

use alloc::vec::Vec;


#[allow(unused_imports)] // float methods in no_std builds
use num_traits::Float as _;
use crate::qpoch::{QBase, poch_inf};
use crate::{C64, CompensatedSum, Error, Result, real};

/// Term cap used when callers do not choose one.
pub const DEFAULT_MAX_TERMS: usize = 10_000;

/// Default relative stopping tolerance.
pub const DEFAULT_TOL: f64 = 1e-17;

/// A numerator (or denominator) parameter `a` counts as `q^-n` when
/// `|a q^n - 1|` is below this.
pub const TERMINATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSpec {
    pub numerator: Vec<C64>,
    pub denominator: Vec<C64>,
    pub z: C64,
    pub base: QBase,
}

impl SeriesSpec {
    pub fn new(numerator: &[C64], denominator: &[C64], z: C64, base: QBase) -> Self {
        SeriesSpec { numerator: numerator.to_vec(), denominator: denominator.to_vec(), z, base }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: C64,
    pub terms_used: usize,
    pub terminated: bool,
    pub last_term_magnitude: f64,
}

/// Smallest `n <= cap` with `|a q^n - 1| < TERMINATION_TOL`.
fn neg_power_index(a: C64, q: QBase, cap: usize) -> Option<usize> {
    if a == real(0.0) {
        return None;
    }
    // |a| = q^-n  <=>  n = ln|a| / ln(1/q)
    let n = (a.norm().ln() / -q.ln()).round();
    if !(n >= 0.0) || n > cap as f64 {
        return None;
    }
    let n = n as usize;
    if (a * q.powi(n as i64) - 1.0).norm() < TERMINATION_TOL { Some(n) } else { None }
}

/// Sums `r phi s (numerator; denominator; q, z)`.
pub fn eval_phi(spec: &SeriesSpec, tol: f64, max_terms: usize) -> Result<SeriesResult> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    let q = spec.base;
    let r = spec.numerator.len();
    let s = spec.denominator.len();

    let term_cap = max_terms.saturating_sub(1);

    // exactly equal numerator/denominator pairs cancel term by term, except a
    // terminating q^-n numerator, which must still end the sum
    let mut num: Vec<C64> = spec.numerator.clone();
    let mut den: Vec<C64> = Vec::with_capacity(s);
    for &b in &spec.denominator {
        let hit = num.iter().position(|&a| a == b && neg_power_index(a, q, term_cap).is_none());
        if let Some(i) = hit {
            num.swap_remove(i);
        } else {
            den.push(b);
        }
    }

    let stop = num.iter().filter_map(|&a| neg_power_index(a, q, term_cap)).min();

    if stop.is_none() {
        if r > s + 1 && spec.z != real(0.0) {
            return Err(Error::DivergentSeries { r, s });
        }
        if r == s + 1 && spec.z.norm() >= 1.0 {
            return Err(Error::DivergentSeries { r, s });
        }
    }
    let last = stop.unwrap_or(usize::MAX);
    for (j, &b) in spec.denominator.iter().enumerate() {
        if let Some(m) = neg_power_index(b, q, term_cap) {
            if m < last && den.contains(&b) {
                return Err(Error::ZeroDenominator { index: j });
            }
        }
    }

    let extra = 1 + s as i32 - r as i32;
    let qf = q.get();
    let mut acc = CompensatedSum::new();
    let mut term = real(1.0);
    acc.add(term);
    let mut small = 0usize;
    let mut k = 0usize;
    let mut qk = 1.0;
    loop {
        if let Some(n) = stop {
            if k == n {
                return Ok(SeriesResult { value: acc.value(), terms_used: n + 1, terminated: true, last_term_magnitude: term.norm() });
            }
        }
        if k + 1 >= max_terms {
            return Err(Error::NoConvergence { terms: max_terms });
        }
        let mut f = spec.z / (1.0 - qk * qf);
        for &a in &num {
            f *= real(1.0) - a * qk;
        }
        for &b in &den {
            f /= real(1.0) - b * qk;
        }
        if extra != 0 {
            let p = qk.powi(extra);
            f *= if extra % 2 == 0 { p } else { -p };
        }
        term *= f;
        acc.add(term);
        k += 1;
        qk = q.powi(k as i64);
        if stop.is_none() {
            let mag = term.norm();
            if mag <= tol * acc.value().norm() {
                small += 1;
                if small == 3 {
                    return Ok(SeriesResult { value: acc.value(), terms_used: k + 1, terminated: false, last_term_magnitude: mag });
                }
            } else {
                small = 0;
            }
        }
    }
}

/// [`eval_phi`] with default tolerance and term cap, returning the value only.
pub fn phi(numerator: &[C64], denominator: &[C64], z: C64, q: QBase) -> Result<C64> {
    eval_phi(&SeriesSpec::new(numerator, denominator, z, q), DEFAULT_TOL, DEFAULT_MAX_TERMS).map(|r| r.value)
}

/// `|1phi0(a; -; q, z) - (az;q)_inf/(z;q)_inf|` for `|z| < 1`.
pub fn check_qbinomial(a: C64, z: C64, q: QBase) -> Result<f64> {
    if !(z.norm() < 1.0) {
        return Err(Error::PreconditionViolation("|z| must be below 1"));
    }
    let lhs = phi(&[a], &[], z, q)?;
    let rhs = poch_inf(a * z, q, crate::qpoch::PRODUCT_TOL)? / poch_inf(z, q, crate::qpoch::PRODUCT_TOL)?;
    Ok((lhs - rhs).norm())
}
