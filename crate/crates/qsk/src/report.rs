//! Report records, summary and file output.
//!
//! Complex values are `[re, im]` pairs. Residuals, tolerances and
//! diagnostics are written as JSON numbers in `{:e}` form; values that are
//! not finite become `null`.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::config::SuiteConfig;
use qsk_core::genfun::{IdentityReport, ParamPoint};
use qsk_core::C64;

pub const SCHEMA_VERSION: &str = "qsk-report/1";

/// A float written in scientific notation.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Sci(pub f64);

impl Serialize for Sci {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        // `{:e}` is the shortest round-trip form and always a valid JSON number
        RawValue::from_string(format!("{:e}", self.0)).map_err(serde::ser::Error::custom)?.serialize(s)
    }
}

/// One named parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Param {
    Real(f64),
    Complex(C64),
    Int(i64),
}

impl Serialize for Param {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            Param::Real(v) => s.serialize_f64(v),
            Param::Complex(z) => [z.re, z.im].serialize(s),
            Param::Int(v) => s.serialize_i64(v),
        }
    }
}

pub type Params = BTreeMap<&'static str, Param>;

/// Parameters of a [`ParamPoint`]; absent ones are left out.
pub fn point_params(p: &ParamPoint) -> Params {
    let mut out = Params::new();
    out.insert("q", Param::Real(p.q.get()));
    out.insert("x", Param::Real(p.x));
    out.insert("t", Param::Real(p.t));
    let named = [("a", p.a), ("b", p.b), ("c", p.c), ("d", p.d), ("alpha", p.alpha), ("beta", p.beta), ("gamma", p.gamma)];
    for (name, v) in named {
        if let Some(v) = v {
            out.insert(name, Param::Complex(v));
        }
    }
    if let Some(c) = p.scale {
        out.insert("scale", Param::Real(c));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Reported without counting as a failure.
    UnresolvedInPaper,
}

fn pair<S: Serializer>(v: &Option<C64>, s: S) -> Result<S::Ok, S::Error> {
    v.map(|z| [z.re, z.im]).serialize(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub tag: String,
    pub class: &'static str,
    /// Position of the point within its tag.
    pub index: usize,
    pub params: Params,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(serialize_with = "pair")]
    pub lhs: Option<C64>,
    #[serde(serialize_with = "pair")]
    pub rhs: Option<C64>,
    pub abs_residual: Sci,
    pub rel_residual: Sci,
    /// The quantity compared against `tolerance`.
    pub residual: Sci,
    pub tolerance: Sci,
    pub n_terms_outer: usize,
    pub n_terms_inner: usize,
    pub in_domain: bool,
    pub converged: bool,
    pub diagnostics: BTreeMap<&'static str, Sci>,
    pub error: Option<String>,
    pub status: Status,
}

impl Record {
    /// A record with no values yet; `status` is set by the caller.
    pub fn blank(tag: String, class: &'static str, index: usize, params: Params) -> Self {
        Record {
            tag,
            class,
            index,
            params,
            n: None,
            m: None,
            lhs: None,
            rhs: None,
            abs_residual: Sci(f64::NAN),
            rel_residual: Sci(f64::NAN),
            residual: Sci(f64::NAN),
            tolerance: Sci(f64::NAN),
            n_terms_outer: 0,
            n_terms_inner: 0,
            in_domain: true,
            converged: true,
            diagnostics: BTreeMap::new(),
            error: None,
            status: Status::Fail,
        }
    }

    /// Copies an identity report; `residual` is its relative residual.
    pub fn from_identity(class: &'static str, index: usize, r: &IdentityReport) -> Self {
        let mut rec = Record::blank(r.tag.to_string(), class, index, point_params(&r.point));
        rec.n = r.n;
        rec.m = r.m;
        if r.error.is_none() {
            rec.lhs = Some(r.lhs);
            rec.rhs = Some(r.rhs);
        }
        rec.abs_residual = Sci(r.abs_residual);
        rec.rel_residual = Sci(r.rel_residual);
        rec.residual = Sci(r.rel_residual);
        rec.n_terms_outer = r.n_terms_outer;
        rec.n_terms_inner = r.n_terms_inner;
        rec.in_domain = r.in_domain;
        rec.converged = r.converged;
        rec.error = r.error.clone();
        rec
    }

    /// Comparable residual; errors and NaN rank above everything.
    pub fn residual_value(&self) -> f64 {
        if self.error.is_some() || self.residual.0.is_nan() {
            f64::INFINITY
        } else {
            self.residual.0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TagSummary {
    pub tag: String,
    pub records: usize,
    pub passed: usize,
    pub failed: usize,
    pub flagged: usize,
    pub max_residual: Sci,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub records: usize,
    pub passed: usize,
    pub failed: usize,
    pub flagged: usize,
    pub per_tag: Vec<TagSummary>,
}

impl Summary {
    pub fn of(records: &[Record]) -> Self {
        let mut per_tag: Vec<TagSummary> = Vec::new();
        for r in records {
            if per_tag.last().is_none_or(|t| t.tag != r.tag) {
                per_tag.push(TagSummary {
                    tag: r.tag.clone(),
                    records: 0,
                    passed: 0,
                    failed: 0,
                    flagged: 0,
                    max_residual: Sci(0.0),
                });
            }
            let t = per_tag.last_mut().expect("pushed above");
            t.records += 1;
            match r.status {
                Status::Pass => t.passed += 1,
                Status::Fail => t.failed += 1,
                Status::UnresolvedInPaper => t.flagged += 1,
            }
            t.max_residual = Sci(t.max_residual.0.max(r.residual_value()));
        }
        Summary {
            records: records.len(),
            passed: per_tag.iter().map(|t| t.passed).sum(),
            failed: per_tag.iter().map(|t| t.failed).sum(),
            flagged: per_tag.iter().map(|t| t.flagged).sum(),
            per_tag,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub config: SuiteConfig,
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: SuiteConfig, records: Vec<Record>) -> Self {
        let summary = Summary::of(&records);
        Report { schema_version: SCHEMA_VERSION, config, records, summary }
    }

    /// Process exit status: 0 iff no record failed.
    pub fn exit_code(&self) -> u8 {
        u8::from(self.summary.failed > 0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are serializable")
    }

    /// One row per record with the parameters as a JSON object string.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "tag", "class", "index", "n", "m", "status", "residual", "tolerance", "abs_residual", "rel_residual",
            "lhs_re", "lhs_im", "rhs_re", "rhs_im", "in_domain", "converged", "params", "error",
        ])?;
        let sci = |v: Sci| if v.0.is_finite() { format!("{:e}", v.0) } else { String::new() };
        let opt = |v: Option<usize>| v.map(|v| v.to_string()).unwrap_or_default();
        let part = |v: Option<C64>, im: bool| v.map(|z| format!("{:e}", if im { z.im } else { z.re })).unwrap_or_default();
        for r in &self.records {
            let status = serde_json::to_value(r.status).expect("status is a plain string");
            w.write_record([
                r.tag.clone(),
                r.class.to_string(),
                r.index.to_string(),
                opt(r.n),
                opt(r.m),
                status.as_str().unwrap_or_default().to_string(),
                sci(r.residual),
                sci(r.tolerance),
                sci(r.abs_residual),
                sci(r.rel_residual),
                part(r.lhs, false),
                part(r.lhs, true),
                part(r.rhs, false),
                part(r.rhs, true),
                r.in_domain.to_string(),
                r.converged.to_string(),
                serde_json::to_string(&r.params).expect("params are serializable"),
                r.error.clone().unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qsk_core::c64;

    #[test]
    fn residuals_are_scientific() {
        let v = serde_json::to_string(&[Sci(0.5), Sci(1.25e-13), Sci(0.0), Sci(f64::NAN)]).unwrap();
        assert_eq!(v, "[5e-1,1.25e-13,0e0,null]");
        let back: Vec<Option<f64>> = serde_json::from_str(&v).unwrap();
        assert_eq!(back, vec![Some(0.5), Some(1.25e-13), Some(0.0), None]);
    }

    #[test]
    fn complex_params_are_pairs() {
        let mut p = Params::new();
        p.insert("gamma", Param::Complex(c64(0.25, -0.5)));
        p.insert("n", Param::Int(3));
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"gamma":[0.25,-0.5],"n":3}"#);
    }

    #[test]
    fn summary_counts_flagged_apart() {
        let mut recs = Vec::new();
        for (tag, status, res) in [("A", Status::Pass, 1e-9), ("A", Status::Fail, 1e-3), ("C29", Status::UnresolvedInPaper, 0.5)] {
            let mut r = Record::blank(tag.into(), "x", 0, Params::new());
            r.status = status;
            r.residual = Sci(res);
            recs.push(r);
        }
        let rep = Report::new(SuiteConfig::default(), recs);
        assert_eq!((rep.summary.passed, rep.summary.failed, rep.summary.flagged), (1, 1, 1));
        assert_eq!(rep.summary.per_tag.len(), 2);
        assert_eq!(rep.summary.per_tag[0].max_residual, Sci(1e-3));
        assert_eq!(rep.exit_code(), 1);
    }
}
