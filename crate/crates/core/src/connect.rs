//! Connection coefficients with one free parameter.
//!
//! Each constructor expands a degree-`n` polynomial of one family in the same
//! family with one parameter replaced. Coefficients whose closed form contains
//! `(1;q)_m` come out as exact zeros when source and target coincide.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // float methods in no_std builds
use num_traits::Float as _;
use crate::polyfam::{AwParams, FamilyId, FamilyParams, LqlParams, QLagParams, UltraParams};
use crate::qpoch::{DENOMINATOR_GUARD, QBase, binom2, poch, poch_qpow};
use crate::{C64, Error, Result, real};

#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionExpansion {
    pub family: FamilyId,
    pub n: usize,
    pub source: FamilyParams,
    pub target: FamilyParams,
    /// `(degree of the target polynomial, coefficient)`
    pub coefficients: Vec<(usize, C64)>,
}

impl ConnectionExpansion {
    /// `sum_k c_k target_k(x)`.
    pub fn evaluate(&self, x: f64) -> Result<C64> {
        let mut acc = crate::CompensatedSum::new();
        for &(k, c) in &self.coefficients {
            acc.add(c * self.target.eval(k, x)?);
        }
        Ok(acc.value())
    }

    /// `|sum_k c_k target_k(x) - source_n(x)|`.
    pub fn residual_at(&self, x: f64) -> Result<f64> {
        Ok((self.evaluate(x)? - self.source.eval(self.n, x)?).norm())
    }

    /// Worst residual over `xs` together with the two natural scales.
    pub fn pointwise(&self, xs: &[f64]) -> Result<PointwiseCheck> {
        let mut out = PointwiseCheck::default();
        for &x in xs {
            let mut acc = crate::CompensatedSum::new();
            let mut terms = 0.0;
            for &(k, c) in &self.coefficients {
                let v = c * self.target.eval(k, x)?;
                terms += v.norm();
                acc.add(v);
            }
            let src = self.source.eval(self.n, x)?;
            out.residual = out.residual.max((acc.value() - src).norm());
            out.source_max = out.source_max.max(src.norm());
            out.term_max = out.term_max.max(terms);
        }
        Ok(out)
    }

    /// Largest deviation from the trivial expansion `{(n, 1)}`.
    pub fn collapse_defect(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|&(k, c)| if k == self.n { (c - 1.0).norm() } else { c.norm() })
            .fold(0.0, f64::max)
    }

    /// Coefficients that are not exactly zero.
    pub fn nonzero(&self) -> impl Iterator<Item = &(usize, C64)> {
        self.coefficients.iter().filter(|(_, c)| *c != real(0.0))
    }
}

/// Outcome of a pointwise expansion check.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PointwiseCheck {
    pub residual: f64,
    /// `max |source_n(x)|`
    pub source_max: f64,
    /// `max sum_k |c_k target_k(x)|`; the f64 floor of `residual` is about `eps * term_max`.
    pub term_max: f64,
}

impl PointwiseCheck {
    /// `residual < tol (1 + source_max)`.
    pub fn passes(&self, tol: f64) -> bool {
        self.residual < tol * (1.0 + self.source_max)
    }

    /// `residual < tol (1 + term_max)`.
    pub fn passes_scaled(&self, tol: f64) -> bool {
        self.residual < tol * (1.0 + self.term_max)
    }
}

fn guard(v: C64, what: &'static str) -> Result<C64> {
    if v.norm() < DENOMINATOR_GUARD { Err(Error::DegenerateDenominator(what)) } else { Ok(v) }
}

/// Askey–Wilson: `p_n(x;a,b,c,d) = sum_k c_k p_k(x;alpha,b,c,d)`.
pub fn aw_connection(n: usize, p: &AwParams, alpha: C64) -> Result<ConnectionExpansion> {
    if alpha == real(0.0) {
        return Err(Error::ZeroParameter("alpha"));
    }
    let AwParams { a, b, c, d, base: q } = *p;
    let s = a * b * c * d;
    let t = alpha * b * c * d;
    let pairs = [real(q.get()), b * c, b * d, c * d];
    let mut coefficients = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let m = n - k;
        let qk = q.powi(k as i64);
        // (y;q)_n / (y;q)_k = (y q^k;q)_{n-k}
        let shifted: C64 = pairs.iter().map(|&y| poch(y * qk, q, m)).product();
        let num = alpha.powi(m as i32) * poch(a / alpha, q, m) * poch(s * q.powi(n as i64 - 1), q, k) * shifted;
        let den = poch(t * q.powi(k as i64 - 1), q, k) * poch(real(q.get()), q, m) * poch(t * q.powi(2 * k as i64), q, m);
        let den = guard(den, "connection denominator")?;
        coefficients.push((k, num / den));
    }
    let target = AwParams { a: alpha, ..*p };
    Ok(ConnectionExpansion {
        family: FamilyId::AskeyWilson,
        n,
        source: FamilyParams::AskeyWilson(*p),
        target: FamilyParams::AskeyWilson(target),
        coefficients,
    })
}

/// Rogers: `C_n(x;beta) = sum_k c_k C_{n-2k}(x;gamma)`.
pub fn ultra_connection(n: usize, beta: f64, gamma: f64, q: QBase) -> Result<ConnectionExpansion> {
    let src = UltraParams::new(beta, q)?;
    let tgt = UltraParams::new(gamma, q)?;
    let mut coefficients = Vec::with_capacity(n / 2 + 1);
    for k in 0..=n / 2 {
        let deg = n - 2 * k;
        let num = (1.0 - gamma * q.powi(deg as i64))
            * gamma.powi(k as i32)
            * poch(real(beta / gamma), q, k).re
            * poch(real(beta), q, n - k).re;
        let den = (1.0 - gamma) * poch_qpow(1.0, q, k) * poch(real(q.get() * gamma), q, n - k).re;
        coefficients.push((deg, real(num / den)));
    }
    Ok(ConnectionExpansion {
        family: FamilyId::ContQUltra,
        n,
        source: FamilyParams::ContQUltra(src),
        target: FamilyParams::ContQUltra(tgt),
        coefficients,
    })
}

/// Little q-Laguerre: `p_n(x;a) = sum_j c_j p_j(x;b)`.
///
/// The power `q^{-C(n,2) + C(j,2) + n(n-j)}` is folded to `q^{C(n-j+1,2)}`
/// before multiplying.
pub fn lql_connection(n: usize, a: f64, b: f64, q: QBase) -> Result<ConnectionExpansion> {
    let src = LqlParams::new(a, q)?;
    let tgt = LqlParams::new(b, q)?;
    let qf = q.get();
    let lead = guard(poch(real(qf * a), q, n), "(qa;q)_n")?.re;
    // (b q^{1-d}/a;q)_d = (q^s;q)_d with s = log_q(b/a) + 1 - d
    let shift = (b / a).ln() / q.ln();
    let mut coefficients = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let d = n - j;
        let power = q.powf(binom2(d as i64 + 1));
        let num = power
            * (-a).powi(d as i32)
            * poch_qpow(d as f64 + 1.0, q, j)
            * poch(real(qf * b), q, j).re
            * poch_qpow(shift + 1.0 - d as f64, q, d);
        coefficients.push((j, real(num / (lead * poch_qpow(1.0, q, j)))));
    }
    Ok(ConnectionExpansion {
        family: FamilyId::LittleQLaguerre,
        n,
        source: FamilyParams::LittleQLaguerre(src),
        target: FamilyParams::LittleQLaguerre(tgt),
        coefficients,
    })
}

/// q-Laguerre: `L_n^(alpha)(x) = sum_j c_j L_j^(beta)(x)`.
pub fn qlag_connection(n: usize, alpha: f64, beta: f64, q: QBase) -> Result<ConnectionExpansion> {
    let src = QLagParams::new(alpha, q)?;
    let tgt = QLagParams::new(beta, q)?;
    let lead = q.powf(n as f64 * (alpha - beta)) / poch_qpow(1.0, q, n);
    let mut coefficients = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let d = n - j;
        let sign = if d.is_multiple_of(2) { 1.0 } else { -1.0 };
        let c = lead
            * sign
            * q.powf(binom2(d as i64))
            * poch_qpow(d as f64 + 1.0, q, j)
            * poch_qpow(j as f64 - n as f64 + beta - alpha + 1.0, q, d);
        coefficients.push((j, real(c)));
    }
    Ok(ConnectionExpansion {
        family: FamilyId::QLaguerre,
        n,
        source: FamilyParams::QLaguerre(src),
        target: FamilyParams::QLaguerre(tgt),
        coefficients,
    })
}

/// Points on each family's natural support: Chebyshev nodes on [-1, 1], the
/// lattice `q^k` for little q-Laguerre, and `0, q, q^-1, q^2, q^-2, ...` for
/// q-Laguerre.
pub fn sample_points(family: &FamilyParams, count: usize) -> Vec<f64> {
    let q = family.base();
    match family.family() {
        FamilyId::AskeyWilson | FamilyId::ContQUltra => {
            (0..count).map(|i| (PI * (2 * i + 1) as f64 / (2 * count) as f64).cos()).collect()
        }
        FamilyId::LittleQLaguerre => (0..count).map(|k| q.powi(k as i64)).collect(),
        FamilyId::QLaguerre => (0..count)
            .map(|i| {
                if i == 0 {
                    0.0
                } else {
                    let k = (i as i64 + 1) / 2;
                    q.powi(if i % 2 == 1 { k } else { -k })
                }
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use proptest::prelude::*;

    fn qb(q: f64) -> QBase {
        QBase::new(q).unwrap()
    }

    fn pointwise_ok(e: &ConnectionExpansion, count: usize, tol: f64) {
        let chk = e.pointwise(&sample_points(&e.source, count)).unwrap();
        assert!(chk.passes(tol), "{:?} {chk:?}", e.family);
    }

    #[test]
    fn aw_examples() {
        let q = qb(0.5);
        let p = AwParams::real(0.3, 0.2, 0.1, 0.05, q);
        let e = aw_connection(3, &p, real(0.3)).unwrap();
        assert!(e.collapse_defect() < 1e-12);
        assert_eq!(e.nonzero().count(), 1);
        let e = aw_connection(0, &p, real(0.2)).unwrap();
        assert_eq!(e.coefficients, alloc::vec![(0, real(1.0))]);
        let e = aw_connection(3, &p, real(0.2)).unwrap();
        assert_eq!(e.coefficients.len(), 4);
        pointwise_ok(&e, 20, 1e-9);
        assert!(aw_connection(2, &p, real(0.0)).is_err());
    }

    #[test]
    fn ultra_examples() {
        let q = qb(0.5);
        let e = ultra_connection(5, 0.3, 0.3, q).unwrap();
        assert!(e.collapse_defect() < 1e-12);
        assert_eq!(e.nonzero().count(), 1);
        let e = ultra_connection(1, 0.3, 0.6, q).unwrap();
        assert_eq!(e.coefficients.len(), 1);
        assert_eq!(e.coefficients[0].0, 1);
        let want = (1.0 - 0.3) / (1.0 - 0.6);
        assert!((e.coefficients[0].1.re - want).abs() < 1e-15);
        pointwise_ok(&e, 20, 1e-10);
        let e = ultra_connection(4, 0.3, 0.6, q).unwrap();
        let degs: Vec<usize> = e.coefficients.iter().map(|c| c.0).collect();
        assert_eq!(degs, alloc::vec![4, 2, 0]);
        pointwise_ok(&e, 20, 1e-10);
    }

    #[test]
    fn lql_examples() {
        let q = qb(0.5);
        let e = lql_connection(4, 0.7, 0.7, q).unwrap();
        assert!(e.collapse_defect() < 1e-12);
        assert_eq!(e.nonzero().count(), 1);
        assert_eq!(lql_connection(0, 0.5, 0.8, q).unwrap().coefficients, alloc::vec![(0, real(1.0))]);
        let e = lql_connection(3, 0.5, 0.8, q).unwrap();
        pointwise_ok(&e, 11, 1e-10);
    }

    #[test]
    fn qlag_examples() {
        let q = qb(0.5);
        let e = qlag_connection(3, 0.4, 0.4, q).unwrap();
        assert!(e.collapse_defect() < 1e-12);
        assert_eq!(e.nonzero().count(), 1);
        let e = qlag_connection(1, 0.0, 1.0, q).unwrap();
        assert_eq!(e.coefficients.len(), 2);
        for x in [0.0, 0.5, 1.0, 2.0] {
            assert!(e.residual_at(x).unwrap() < 1e-13);
        }
        let e = qlag_connection(4, 0.5, 1.5, qb(0.3)).unwrap();
        pointwise_ok(&e, 9, 1e-9);
    }

    #[test]
    fn sample_supports() {
        let q = qb(0.5);
        let lag = FamilyParams::QLaguerre(QLagParams::new(0.0, q).unwrap());
        assert_eq!(sample_points(&lag, 5), alloc::vec![0.0, 0.5, 2.0, 0.25, 4.0]);
        let lql = FamilyParams::LittleQLaguerre(LqlParams::new(0.5, q).unwrap());
        assert_eq!(sample_points(&lql, 3), alloc::vec![1.0, 0.5, 0.25]);
        let u = FamilyParams::ContQUltra(UltraParams::new(0.5, q).unwrap());
        assert!(sample_points(&u, 20).iter().all(|x| x.abs() < 1.0));
    }

    proptest! {
        #![proptest_config(crate::testutil::pt(50))]
        #[test]
        fn aw_pointwise(
            a in -0.9f64..0.9, al in -0.9f64..0.9, b in -0.9f64..0.9, cr in 0.0f64..0.8, ci in -0.5f64..0.5,
            q in 0.2f64..0.9, n in 0usize..=8,
        ) {
            prop_assume!(a.abs() > 0.05 && al.abs() > 0.05);
            let q = qb(q);
            let c = c64(cr, ci);
            prop_assume!(c.norm() < 0.95);
            let p = AwParams::new(real(a), real(b), c, c.conj(), q);
            let e = aw_connection(n, &p, real(al)).unwrap();
            let chk = e.pointwise(&sample_points(&e.source, 20)).unwrap();
            prop_assert!(chk.passes_scaled(1e-12), "{:?}", chk);
        }

        #[test]
        fn ultra_pointwise(b in -0.95f64..0.95, g in -0.95f64..0.95, q in 0.1f64..0.9, n in 0usize..=8) {
            prop_assume!(b.abs() > 0.01 && g.abs() > 0.01);
            let e = ultra_connection(n, b, g, qb(q)).unwrap();
            prop_assert!(e.coefficients.iter().all(|&(k, _)| (n - k) % 2 == 0));
            let chk = e.pointwise(&sample_points(&e.source, 20)).unwrap();
            prop_assert!(chk.passes_scaled(1e-12), "{:?}", chk);
        }

        #[test]
        fn ultra_transitive(b in -0.9f64..0.9, g in -0.9f64..0.9, d in -0.9f64..0.9, q in 0.1f64..0.9, n in 0usize..=8) {
            prop_assume!(b.abs() > 0.05 && g.abs() > 0.05 && d.abs() > 0.05);
            let q = qb(q);
            let direct = ultra_connection(n, b, d, q).unwrap();
            let first = ultra_connection(n, b, g, q).unwrap();
            let mut composed = alloc::vec![0.0f64; n + 1];
            for &(m, c) in &first.coefficients {
                for &(k, c2) in &ultra_connection(m, g, d, q).unwrap().coefficients {
                    composed[k] += c.re * c2.re;
                }
            }
            for &(k, c) in &direct.coefficients {
                prop_assert!((composed[k] - c.re).abs() < 1e-9 * (1.0 + c.re.abs()));
            }
        }

        #[test]
        fn lql_pointwise(a in 0.05f64..1.0, b in 0.05f64..1.0, q in 0.2f64..0.9, n in 0usize..=8) {
            let e = lql_connection(n, a, b, qb(q)).unwrap();
            let chk = e.pointwise(&sample_points(&e.source, 20)).unwrap();
            prop_assert!(chk.passes_scaled(1e-12), "{:?}", chk);
        }

        #[test]
        fn qlag_pointwise(al in -0.95f64..3.0, be in -0.95f64..3.0, q in 0.2f64..0.9, n in 0usize..=8) {
            let e = qlag_connection(n, al, be, qb(q)).unwrap();
            let chk = e.pointwise(&sample_points(&e.source, 20)).unwrap();
            prop_assert!(chk.passes_scaled(1e-12), "{:?}", chk);
        }

        #[test]
        fn collapse_is_exact(x in 0.05f64..0.9, q in 0.1f64..0.9, n in 0usize..=12) {
            let q = qb(q);
            let p = AwParams::real(x, 0.2, -0.3, 0.1, q);
            let all = [
                aw_connection(n, &p, real(x)).unwrap(),
                ultra_connection(n, x, x, q).unwrap(),
                lql_connection(n, x, x, q).unwrap(),
                qlag_connection(n, x, x, q).unwrap(),
            ];
            for e in &all {
                prop_assert!(e.collapse_defect() < 1e-12, "{:?} {}", e.family, e.collapse_defect());
                prop_assert_eq!(e.nonzero().count(), 1);
            }
        }
    }
}
