//! Job configuration: one JSON document with a schema tag, the field, the precision caps,
//! the task name, a seed and a task payload.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::canon::{parse_series, parse_tate};
use crate::error::{Error, Result};
use crate::field::{Context, Fe, FieldParams, Precision};
use crate::mzv::CompositionArray;
use crate::tate::TateElement;

pub const CONFIG_SCHEMA: &str = "ffspecial.config/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Powersum,
    Qpoly,
    Zeta,
    Polylog,
    /// The expression of a deformed zeta value through polylogarithms.
    #[serde(rename = "thm11", alias = "polylog-expansion")]
    PolylogExpansion,
    Star,
    Lvalue,
    GaussThakur,
    ModuleG,
    Gc,
    Rigid,
    DivisionTower,
}

impl Task {
    pub const ALL: [Task; 12] = [
        Task::Powersum,
        Task::Qpoly,
        Task::Zeta,
        Task::Polylog,
        Task::PolylogExpansion,
        Task::Star,
        Task::Lvalue,
        Task::GaussThakur,
        Task::ModuleG,
        Task::Gc,
        Task::Rigid,
        Task::DivisionTower,
    ];

    #[must_use]
    pub fn name(self) -> &'static str {
        match self {
            Task::Powersum => "powersum",
            Task::Qpoly => "qpoly",
            Task::Zeta => "zeta",
            Task::Polylog => "polylog",
            Task::PolylogExpansion => "thm11",
            Task::Star => "star",
            Task::Lvalue => "lvalue",
            Task::GaussThakur => "gauss-thakur",
            Task::ModuleG => "module-g",
            Task::Gc => "gc",
            Task::Rigid => "rigid",
            Task::DivisionTower => "division-tower",
        }
    }

    pub fn parse(s: &str) -> Result<Task> {
        Task::ALL
            .into_iter()
            .find(|t| t.name() == s || (s == "polylog-expansion" && *t == Task::PolylogExpansion))
            .ok_or_else(|| Error::Config(format!("unknown task '{s}'")))
    }
}

/// One row `(U_i; s_i)` of a composition array.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RowSpec {
    #[serde(default)]
    pub u: Vec<usize>,
    pub s: u32,
}

/// `t_var ↦ value`, the value a canonical field-element string such as `1` or `g^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Binding {
    pub var: usize,
    pub value: String,
}

/// Task inputs. Each task reads the fields it needs and rejects a config missing them.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Payload {
    /// The set `U` of a power sum or `Q` polynomial.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<usize>>,
    /// The exponent `N`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    /// Degree `d` of a power sum.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub array: Option<Vec<RowSpec>>,
    /// One canonical Tate-algebra string per row.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<String>>,
    /// Star variant of the polylogarithm.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star: Option<bool>,
    /// Highest degree shell for partial sums and character-sum enumeration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bindings: Option<Vec<Binding>>,
    /// Coefficients of the prime `𝔭` over `F_q`, low to high.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<Vec<u32>>,
    /// Canonical string of the root `ξ` of `𝔭`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<String>,
    /// First row kept by the rigid system.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row: Option<usize>,
    /// `carlitz` or `g` for the division tower.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u32>,
    /// Number of seeded samples for randomized checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub schema: String,
    pub field: FieldParams,
    #[serde(default)]
    pub precision: Precision,
    pub task: Task,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub payload: Payload,
}

/// Command-line overrides applied on top of the file.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub floor: Option<i64>,
    pub tmax: Option<u32>,
    pub seed: Option<u64>,
}

impl JobConfig {
    pub fn from_json(text: &str) -> Result<JobConfig> {
        let cfg: JobConfig = serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid config: {e}")))?;
        if cfg.schema != CONFIG_SCHEMA {
            return Err(Error::Config(format!("unsupported schema '{}', expected '{CONFIG_SCHEMA}'", cfg.schema)));
        }
        Ok(cfg)
    }

    #[must_use]
    pub fn with_overrides(mut self, o: Overrides) -> JobConfig {
        if let Some(f) = o.floor {
            self.precision.v_floor = f;
        }
        if let Some(t) = o.tmax {
            self.precision.t_max = t;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        self
    }

    pub fn context(&self) -> Result<Arc<Context>> {
        Context::new(self.field, self.precision)
    }

    /// Working floor as a numerator over `R`.
    #[must_use]
    pub fn floor(&self, ctx: &Context) -> i64 {
        ctx.vnum(self.precision.v_floor)
    }
}

fn missing(name: &str) -> Error {
    Error::Config(format!("payload field '{name}' is required for this task"))
}

impl Payload {
    pub fn u(&self) -> Result<Vec<usize>> {
        self.u.clone().ok_or_else(|| missing("u"))
    }
    pub fn n(&self) -> Result<u32> {
        self.n.ok_or_else(|| missing("n"))
    }
    pub fn d(&self) -> Result<u32> {
        self.d.ok_or_else(|| missing("d"))
    }
    pub fn array(&self) -> Result<CompositionArray> {
        let rows = self.array.as_ref().ok_or_else(|| missing("array"))?;
        CompositionArray::new(rows.iter().map(|r| (r.u.clone(), r.s)).collect())
    }
    pub fn point(&self, ctx: &Arc<Context>) -> Result<Vec<TateElement>> {
        let pts = self.point.as_ref().ok_or_else(|| missing("point"))?;
        pts.iter().map(|s| parse_tate(ctx, s)).collect()
    }
    pub fn bindings(&self, ctx: &Arc<Context>) -> Result<Vec<(usize, Fe)>> {
        let bs = self.bindings.as_ref().ok_or_else(|| missing("bindings"))?;
        bs.iter().map(|b| Ok((b.var, parse_elem(ctx, &b.value)?))).collect()
    }
    pub fn prime(&self, ctx: &Context) -> Result<Vec<Fe>> {
        let p = self.prime.as_ref().ok_or_else(|| missing("prime"))?;
        if p.iter().any(|&c| c >= ctx.p()) || ctx.q() != u64::from(ctx.p()) {
            return Err(Error::Config("prime coefficients must lie in the prime field F_q".into()));
        }
        Ok(p.clone())
    }
    pub fn xi(&self, ctx: &Arc<Context>) -> Result<Fe> {
        parse_elem(ctx, self.xi.as_deref().ok_or_else(|| missing("xi"))?)
    }
}

/// A field element of `F_{q^m}` from its canonical string.
pub fn parse_elem(ctx: &Arc<Context>, s: &str) -> Result<Fe> {
    let x = parse_series(ctx, s)?;
    match x.terms() {
        [] if x.is_exact() => Ok(0),
        [(0, c)] if x.is_exact() => Ok(*c),
        _ => Err(Error::Config(format!("'{s}' is not a constant field element"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_config_round_trip() {
        let text = r#"{"schema":"ffspecial.config/1","field":{"p":3},"task":"qpoly","payload":{"u":[1],"n":1}}"#;
        let cfg = JobConfig::from_json(text).unwrap();
        assert_eq!(cfg.task, Task::Qpoly);
        assert_eq!(cfg.field.m, 1);
        assert_eq!(cfg.precision, Precision::default());
        let again = JobConfig::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn test_config_rejects_unknown() {
        let bad_schema = r#"{"schema":"x/0","field":{"p":2},"task":"zeta"}"#;
        assert_eq!(JobConfig::from_json(bad_schema).unwrap_err().exit_code(), 2);
        let bad_field = r#"{"schema":"ffspecial.config/1","field":{"p":2},"task":"zeta","payload":{"bogus":1}}"#;
        assert!(JobConfig::from_json(bad_field).is_err());
        assert!(Task::parse("nope").is_err());
        assert_eq!(Task::parse("gauss-thakur").unwrap(), Task::GaussThakur);
    }
}
