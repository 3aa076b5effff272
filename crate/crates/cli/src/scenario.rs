//! Scenario files: TOML documents holding shared field definitions and a list of tasks.
//!
//! ```toml
//! domain_radius = 1.0
//!
//! [moduli]
//! youngs = 1.0
//! poisson = 0.25
//!
//! [fields.sigma]
//! codomain = "sym-tensor"
//! terms = [{ coeff = 1.0, k = -1, p = 0, mode_n = 1, parity = "cos", comp = "rr" }]
//!
//! [fields.b]
//! codomain = "vector"
//! points = [{ alpha = [0, 0], value = [[{ q = "-1", pi = 1 }], 0.0] }]
//!
//! [[scenario]]
//! name = "flamant"
//! task = "check-equilibrium"
//! stress = "sigma"
//! body = "b"
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use defectfield::coeff::{rat_from_f64, rat_to_f64, Coeff, Rational};
use defectfield::elasticity::IsotropicModuli;
use defectfield::field_algebra::{Axis, Codomain, Component, MultiIndex, Parity, PointPart, SingularField, SmoothTerm};
use defectfield::testfn_quadrature::QuadratureSpec;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::grid::GridSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    CheckEquilibrium,
    CheckCompatibility,
    CheckIncompatibility,
    Solve,
    Force,
    Sdeg,
    Render,
}

impl Task {
    /// Tasks whose outcome is not a verdict.
    pub fn is_verdict_free(self) -> bool {
        matches!(self, Task::Solve | Task::Render | Task::Sdeg)
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Task::CheckEquilibrium => "check-equilibrium",
            Task::CheckCompatibility => "check-compatibility",
            Task::CheckIncompatibility => "check-incompatibility",
            Task::Solve => "solve",
            Task::Force => "force",
            Task::Sdeg => "sdeg",
            Task::Render => "render",
        })
    }
}

/// Rational written as a number or as `"p/q"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalSpec {
    Number(f64),
    Text(String),
}

/// `q π^pi ℓ^ell`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffMono {
    pub q: RationalSpec,
    #[serde(default, skip_serializing_if = "is_zero_i32")]
    pub pi: i32,
    #[serde(default, skip_serializing_if = "is_zero_u32")]
    pub ell: u32,
}

fn is_zero_i32(v: &i32) -> bool {
    *v == 0
}

fn is_zero_u32(v: &u32) -> bool {
    *v == 0
}

/// A plain number, or an exact sum of monomials in `π` and `ℓ = ln ρ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffSpec {
    Number(f64),
    Exact(Vec<CoeffMono>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueSpec {
    One(CoeffSpec),
    Many(Vec<CoeffSpec>),
}

/// `coeff · r^k (ln r)^p · trig(mode_n θ)` in component `comp`.
///
/// Exponents are read as numbers and checked for integrality here, so a
/// malformed term is reported against its field label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub coeff: CoeffSpec,
    pub k: f64,
    #[serde(default)]
    pub p: f64,
    #[serde(default)]
    pub mode_n: f64,
    #[serde(default = "cos")]
    pub parity: String,
    pub comp: String,
}

fn cos() -> String {
    "cos".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub alpha: [f64; 2],
    pub value: ValueSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub codomain: Codomain,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<TermSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<PointSpec>,
    /// Finite-part reference radius; `R/2` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
}

/// Defect whose force is computed: a named density field or one of the standard ones.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DefectSpec {
    Dislocation { burgers: [f64; 2] },
    Dipole { burgers: [f64; 2], direction: [f64; 2] },
    Dilation { strength: f64 },
    Density { field: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioEntry {
    pub name: String,
    pub task: Task,
    #[serde(default)]
    pub moduli: Option<IsotropicModuli>,
    #[serde(default)]
    pub stress: Option<String>,
    #[serde(default)]
    pub body: Option<String>,
    #[serde(default)]
    pub strain: Option<String>,
    #[serde(default)]
    pub incompatibility: Option<String>,
    #[serde(default)]
    pub field: Option<String>,
    #[serde(default)]
    pub defect: Option<DefectSpec>,
    /// Equilibrium only: check the restricted conditions instead of the full ones.
    #[serde(default)]
    pub restricted: bool,
    #[serde(default)]
    pub quadrature: Option<QuadratureSpec>,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    /// Rescale factors for `sdeg`; the dyadic grid `2⁻¹…2⁻⁸` by default.
    #[serde(default)]
    pub lambdas: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default = "unit_radius")]
    pub domain_radius: f64,
    #[serde(default)]
    pub moduli: Option<IsotropicModuli>,
    #[serde(default)]
    pub fields: BTreeMap<String, FieldSpec>,
    #[serde(default)]
    pub scenario: Vec<ScenarioEntry>,
}

fn unit_radius() -> f64 {
    1.0
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Self::parse(&text).map_err(|e| CliError::Parse {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    /// Build every field and check that every referenced label resolves.
    pub fn validate(&self) -> Result<BTreeMap<String, SingularField>, CliError> {
        if !(self.domain_radius.is_finite() && self.domain_radius > 0.0) {
            return Err(CliError::Validation(format!(
                "domain_radius must be positive, got {}",
                self.domain_radius
            )));
        }
        let mut built = BTreeMap::new();
        for (label, spec) in &self.fields {
            let f = spec.to_field(self.domain_radius).map_err(|message| CliError::Field {
                label: label.clone(),
                message,
            })?;
            built.insert(label.clone(), f);
        }
        let mut names = std::collections::BTreeSet::new();
        for entry in &self.scenario {
            if !names.insert(entry.name.as_str()) {
                return Err(CliError::Validation(format!("duplicate scenario name `{}`", entry.name)));
            }
            for label in entry.labels() {
                if !built.contains_key(label) {
                    return Err(CliError::Scenario {
                        name: entry.name.clone(),
                        message: format!("unknown field label `{label}`"),
                    });
                }
            }
        }
        Ok(built)
    }
}

impl ScenarioEntry {
    fn labels(&self) -> impl Iterator<Item = &str> {
        let defect = match &self.defect {
            Some(DefectSpec::Density { field }) => Some(field.as_str()),
            _ => None,
        };
        [&self.stress, &self.body, &self.strain, &self.incompatibility, &self.field]
            .into_iter()
            .filter_map(|o| o.as_deref())
            .chain(defect)
    }
}

fn integer(v: f64, what: &str, lo: f64, hi: f64) -> Result<i64, String> {
    if v.fract() != 0.0 || !v.is_finite() {
        return Err(format!("{what} must be an integer, got {v}"));
    }
    if v < lo || v > hi {
        return Err(format!("{what} = {v} is out of range [{lo}, {hi}]"));
    }
    Ok(v as i64)
}

fn parse_rational(q: &RationalSpec) -> Result<Rational, String> {
    match q {
        RationalSpec::Number(x) => rat_from_f64(*x).ok_or_else(|| format!("coefficient {x} is not finite")),
        RationalSpec::Text(s) => Rational::from_str(s.trim()).map_err(|e| format!("bad rational `{s}`: {e}")),
    }
}

impl CoeffSpec {
    pub fn to_coeff(&self) -> Result<Coeff, String> {
        match self {
            CoeffSpec::Number(x) => Coeff::from_f64(*x).ok_or_else(|| format!("coefficient {x} is not finite")),
            CoeffSpec::Exact(monos) => monos.iter().try_fold(Coeff::zero(), |acc, m| {
                Ok(acc + Coeff::monomial(parse_rational(&m.q)?, m.pi, m.ell))
            }),
        }
    }

    pub fn from_coeff(c: &Coeff) -> Self {
        if let Some(q) = c.as_rational() {
            let x = rat_to_f64(&q);
            if rat_from_f64(x).as_ref() == Some(&q) {
                return CoeffSpec::Number(x);
            }
        }
        CoeffSpec::Exact(
            c.terms()
                .map(|(&(pi, ell), q)| CoeffMono {
                    q: RationalSpec::Text(q.to_string()),
                    pi,
                    ell,
                })
                .collect(),
        )
    }
}

fn parse_component(s: &str) -> Result<Component, String> {
    Ok(match s {
        "scalar" => Component::Scalar,
        "1" => Component::Cart(0),
        "2" => Component::Cart(1),
        "r" => Component::Polar(Axis::R),
        "theta" => Component::Polar(Axis::Theta),
        "11" => Component::CartPair(0, 0),
        "12" => Component::CartPair(0, 1),
        "21" => Component::CartPair(1, 0),
        "22" => Component::CartPair(1, 1),
        "rr" => Component::PolarPair(Axis::R, Axis::R),
        "rtheta" => Component::PolarPair(Axis::R, Axis::Theta),
        "thetar" => Component::PolarPair(Axis::Theta, Axis::R),
        "thetatheta" => Component::PolarPair(Axis::Theta, Axis::Theta),
        other => return Err(format!("unknown component `{other}`")),
    })
}

fn component_name(c: Component) -> String {
    let axis = |a: Axis| match a {
        Axis::R => "r",
        Axis::Theta => "theta",
    };
    match c {
        Component::Scalar => "scalar".into(),
        Component::Cart(i) => format!("{}", i + 1),
        Component::Polar(a) => axis(a).into(),
        Component::CartPair(i, j) => format!("{}{}", i + 1, j + 1),
        Component::PolarPair(a, b) => format!("{}{}", axis(a), axis(b)),
    }
}

impl TermSpec {
    pub fn to_term(&self) -> Result<SmoothTerm, String> {
        let k = integer(self.k, "k", i32::MIN as f64, i32::MAX as f64)? as i32;
        let p = integer(self.p, "p", 0.0, 2.0)? as u8;
        let n = integer(self.mode_n, "mode_n", 0.0, 64.0)? as u32;
        let parity = match self.parity.as_str() {
            "cos" => Parity::Cos,
            "sin" => Parity::Sin,
            other => return Err(format!("parity must be `cos` or `sin`, got `{other}`")),
        };
        Ok(SmoothTerm::exact(self.coeff.to_coeff()?, k, p, n, parity, parse_component(&self.comp)?))
    }

    pub fn from_term(t: &SmoothTerm) -> Self {
        Self {
            coeff: CoeffSpec::from_coeff(&t.coeff),
            k: t.k as f64,
            p: t.p as f64,
            mode_n: t.n as f64,
            parity: match t.parity {
                Parity::Cos => "cos".into(),
                Parity::Sin => "sin".into(),
            },
            comp: component_name(t.comp),
        }
    }
}

impl FieldSpec {
    pub fn to_field(&self, domain_radius: f64) -> Result<SingularField, String> {
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| t.to_term().map_err(|e| format!("term {i}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        let width = self.codomain.len();
        let mut point = PointPart::new(width);
        for (i, p) in self.points.iter().enumerate() {
            let a1 = integer(p.alpha[0], "alpha[0]", 0.0, 64.0).map_err(|e| format!("point {i}: {e}"))?;
            let a2 = integer(p.alpha[1], "alpha[1]", 0.0, 64.0).map_err(|e| format!("point {i}: {e}"))?;
            let values: Vec<Coeff> = match &p.value {
                ValueSpec::One(c) => vec![c.to_coeff()?],
                ValueSpec::Many(cs) => cs.iter().map(CoeffSpec::to_coeff).collect::<Result<_, _>>()?,
            };
            if values.len() != width {
                return Err(format!(
                    "point {i}: value has {} components, {:?} needs {width}",
                    values.len(),
                    self.codomain
                ));
            }
            point.add_entry(MultiIndex(a1 as u32, a2 as u32), &values);
        }
        let mut f = SingularField::from_terms(self.codomain, domain_radius, &terms)
            .and_then(|f| f.with_point(point))
            .map_err(|e| e.to_string())?;
        if let Some(rho) = self.rho {
            f = f.with_reference_radius(rho).map_err(|e| e.to_string())?;
        }
        Ok(f)
    }

    /// Cartesian terms and point entries of `f`, in the scenario format.
    pub fn from_field(f: &SingularField) -> Self {
        let default_rho = 0.5 * f.domain_radius();
        Self {
            codomain: f.codomain(),
            terms: f.to_terms().iter().map(TermSpec::from_term).collect(),
            points: f
                .point()
                .entries()
                .map(|(alpha, v)| PointSpec {
                    alpha: [alpha.0 as f64, alpha.1 as f64],
                    value: ValueSpec::Many(v.iter().map(CoeffSpec::from_coeff).collect()),
                })
                .collect(),
            rho: (f.reference_radius() != default_rho).then(|| f.reference_radius()),
        }
    }
}
