//! Task execution and artifact writing.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use defectfield::checkers::{
    check_compatibility_with, check_equilibrium_restricted, check_equilibrium_with, check_incompatibility_with,
    identify_point_defect, loop_integral_traction, CheckReport, Condition, DegreeReport, Verdict,
};
use defectfield::defect_force::{
    defect_fields, dilation_density, dilation_force, dipole_density, dipole_force_couple, dislocation_density,
    force_from_eshelby, force_loop_oracle, generalized_force, interaction_eshelby, peach_koehler, smooth_fields,
};
use defectfield::elasticity::{general_point_solution, verify_solution_with, IsotropicModuli, PointSourceProblem};
use defectfield::field_algebra::{degree_of_divergence, scaling_degree, Codomain, SingularField};
use defectfield::testfn_quadrature::{dyadic_grid, estimate_scaling_degree, scaling_probe, QuadratureSpec};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::grid::render_grid;
use crate::scenario::{DefectSpec, FieldSpec, ScenarioEntry, ScenarioFile, Task};

/// Relative agreement required between the force loop and the closed forms.
pub const FORCE_REL_TOL: f64 = 1e-6;

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioRecord {
    pub name: String,
    pub task: Task,
    /// A verdict, or `completed` for solve, sdeg and render.
    pub status: String,
    pub reports: Vec<CheckReport>,
    pub values: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResultRecord {
    pub scenarios: Vec<ScenarioRecord>,
}

pub struct Outcome {
    pub record: ScenarioRecord,
    pub text: String,
    pub grid: Option<String>,
}

impl Outcome {
    /// Counts as a success for the exit status.
    pub fn ok(&self) -> bool {
        self.record.task.is_verdict_free() || self.record.status == Verdict::Satisfied.to_string()
    }
}

struct Context<'a> {
    file: &'a ScenarioFile,
    fields: &'a BTreeMap<String, SingularField>,
}

impl Context<'_> {
    fn field(&self, entry: &ScenarioEntry, label: &Option<String>, role: &str) -> Result<&SingularField, CliError> {
        let label = label
            .as_deref()
            .ok_or_else(|| CliError::scenario(&entry.name, format!("task {} needs `{role}`", entry.task)))?;
        self.fields
            .get(label)
            .ok_or_else(|| CliError::scenario(&entry.name, format!("unknown field label `{label}`")))
    }

    fn optional(&self, entry: &ScenarioEntry, label: &Option<String>, role: &str, codomain: Codomain) -> Result<SingularField, CliError> {
        match label {
            Some(_) => self.field(entry, label, role).cloned(),
            None => Ok(SingularField::zero(codomain, self.file.domain_radius)),
        }
    }

    fn moduli(&self, entry: &ScenarioEntry) -> Result<IsotropicModuli, CliError> {
        entry
            .moduli
            .clone()
            .or_else(|| self.file.moduli.clone())
            .ok_or_else(|| CliError::scenario(&entry.name, format!("task {} needs moduli", entry.task)))
    }
}

fn combined_status(reports: &[CheckReport]) -> String {
    let v = if reports.iter().any(|r| r.verdict == Verdict::Violated) {
        Verdict::Violated
    } else if reports.iter().any(|r| r.verdict == Verdict::InsufficientInformation) {
        Verdict::InsufficientInformation
    } else {
        Verdict::Satisfied
    };
    v.to_string()
}

fn vec2(v: [f64; 2]) -> Value {
    json!(v)
}

/// Run every entry with the given task, concurrently, in file order.
pub fn run_file(file: &ScenarioFile, task: Task) -> Result<Vec<Outcome>, CliError> {
    let fields = file.validate()?;
    let entries: Vec<&ScenarioEntry> = file.scenario.iter().filter(|e| e.task == task).collect();
    if entries.is_empty() {
        return Err(CliError::Validation(format!("no scenario entry has task `{task}`")));
    }
    let ctx = Context { file, fields: &fields };
    std::thread::scope(|s| {
        let handles: Vec<_> = entries.iter().map(|e| s.spawn(|| run_entry(&ctx, e))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(CliError::Validation("scenario worker panicked".into()))))
            .collect()
    })
}

fn run_entry(ctx: &Context<'_>, entry: &ScenarioEntry) -> Result<Outcome, CliError> {
    let spec = entry.quadrature.clone().unwrap_or_default();
    spec.validate().map_err(|e| CliError::scenario(&entry.name, e))?;
    let err = |e: &dyn std::fmt::Display| CliError::scenario(&entry.name, e);
    let mut values = BTreeMap::new();
    let mut reports = Vec::new();
    let mut grid = None;
    let mut text = String::new();
    match entry.task {
        Task::CheckEquilibrium => {
            let sigma = ctx.field(entry, &entry.stress, "stress")?;
            let body = ctx.optional(entry, &entry.body, "body", Codomain::Vector)?;
            let report = if entry.restricted {
                check_equilibrium_restricted(sigma, body.point())
            } else {
                check_equilibrium_with(sigma, &body, &spec)
            }
            .map_err(|e| err(&e))?;
            if let Ok(t) = loop_integral_traction(&sigma.restrict(), 0.25 * sigma.domain_radius()) {
                values.insert("loop_traction".into(), vec2(t));
            }
            reports.push(report);
        }
        Task::CheckCompatibility => {
            let e = ctx.field(entry, &entry.strain, "strain")?;
            reports.push(check_compatibility_with(e, &spec).map_err(|x| err(&x))?);
            if let Ok(ch) = identify_point_defect(e) {
                values.insert("burgers".into(), vec2(ch.burgers));
                values.insert("disclination".into(), json!(ch.disclination));
                values.insert("higher_resolved".into(), json!(ch.higher_resolved));
            }
        }
        Task::CheckIncompatibility => {
            let e = ctx.field(entry, &entry.strain, "strain")?;
            let n = ctx.field(entry, &entry.incompatibility, "incompatibility")?;
            reports.push(check_incompatibility_with(e, n, &spec).map_err(|x| err(&x))?);
        }
        Task::Solve => {
            let m = ctx.moduli(entry)?;
            let b = ctx.optional(entry, &entry.body, "body", Codomain::Vector)?;
            let n = ctx.optional(entry, &entry.incompatibility, "incompatibility", Codomain::Scalar)?;
            if b.has_smooth_part() || n.has_smooth_part() || b.codomain() != Codomain::Vector || n.codomain() != Codomain::Scalar {
                return Err(CliError::scenario(
                    &entry.name,
                    "solve needs a point-supported vector body force and scalar incompatibility",
                ));
            }
            let p = PointSourceProblem::new(b.point().clone(), n.point().clone(), m, ctx.file.domain_radius)
                .map_err(|e| err(&e))?;
            let sigma = general_point_solution(&p).map_err(|e| err(&e))?;
            let (eq, inc) = verify_solution_with(&sigma, &p, &spec).map_err(|e| err(&e))?;
            reports.extend([eq, inc]);
            values.insert("solution".into(), json!(FieldSpec::from_field(&sigma)));
            values.insert("degree".into(), json!(degree_of_divergence(&sigma)));
            if let Some(g) = &entry.grid {
                grid = Some(render_grid(&sigma, g)?);
            }
        }
        Task::Force => {
            let (report, v) = force(ctx, entry, &spec)?;
            values = v;
            reports.push(report);
        }
        Task::Sdeg => {
            let f = ctx.field(entry, &entry.field, "field")?;
            let sd = scaling_degree(f);
            let probe = scaling_probe(f, 0.5 * f.domain_radius()).map_err(|e| err(&e))?;
            let lambdas = entry.lambdas.clone().unwrap_or_else(dyadic_grid);
            let est = estimate_scaling_degree(f, &probe, &lambdas).map_err(|e| err(&e))?;
            values.insert("sd_analytic".into(), json!(sd));
            values.insert("deg_analytic".into(), json!(sd - 2.0));
            values.insert("sd_empirical".into(), json!(est));
            values.insert("deg_empirical".into(), json!(est - 2.0));
            let _ = writeln!(text, "scaling degree: analytic {sd}, empirical {est:.6}");
            let _ = writeln!(text, "degree of divergence: analytic {}, empirical {:.6}", sd - 2.0, est - 2.0);
        }
        Task::Render => {
            let f = ctx.field(entry, &entry.field, "field")?;
            let g = entry
                .grid
                .as_ref()
                .ok_or_else(|| CliError::scenario(&entry.name, "render needs a `grid`"))?;
            let csv = render_grid(f, g)?;
            let _ = writeln!(text, "rendered {} nodes", csv.lines().count() - 1);
            grid = Some(csv);
        }
    }
    let status = if entry.task.is_verdict_free() {
        "completed".to_string()
    } else {
        combined_status(&reports)
    };
    let mut block = format!("== {} ({}) ==\n", entry.name, entry.task);
    for r in &reports {
        block.push_str(&r.to_string());
    }
    block.push_str(&text);
    for (k, v) in &values {
        if k != "solution" {
            let _ = writeln!(block, "{k}: {v}");
        }
    }
    let _ = writeln!(block, "status: {status}");
    Ok(Outcome {
        record: ScenarioRecord {
            name: entry.name.clone(),
            task: entry.task,
            status,
            reports,
            values,
        },
        text: block,
        grid,
    })
}

fn stress_at_origin(s: &SingularField) -> Result<[[f64; 2]; 2], CliError> {
    let v = s
        .eval_smooth(f64::MIN_POSITIVE, 0.0)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    Ok([[v[0], v[1]], [v[2], v[3]]])
}

fn force(
    ctx: &Context<'_>,
    entry: &ScenarioEntry,
    spec: &QuadratureSpec,
) -> Result<(CheckReport, BTreeMap<String, Value>), CliError> {
    let err = |e: &dyn std::fmt::Display| CliError::scenario(&entry.name, e);
    let m = ctx.moduli(entry)?;
    let sigma2 = ctx.field(entry, &entry.stress, "stress")?;
    if !sigma2.is_polynomial() {
        return Err(CliError::scenario(&entry.name, "the applied stress must be a polynomial field"));
    }
    let r = ctx.file.domain_radius;
    let defect = entry
        .defect
        .as_ref()
        .ok_or_else(|| CliError::scenario(&entry.name, "force needs a `defect`"))?;
    let (density, closed) = match defect {
        DefectSpec::Dislocation { burgers } => (
            dislocation_density(*burgers, r).map_err(|e| err(&e))?,
            Some(peach_koehler(*burgers, stress_at_origin(sigma2)?)),
        ),
        DefectSpec::Dipole { burgers, direction } => (
            dipole_density(*burgers, *direction, r).map_err(|e| err(&e))?,
            Some(dipole_force_couple(*burgers, *direction, sigma2).map_err(|e| err(&e))?.force),
        ),
        DefectSpec::Dilation { strength } => (
            dilation_density(*strength, r).map_err(|e| err(&e))?,
            Some(dilation_force(*strength, sigma2).map_err(|e| err(&e))?.force),
        ),
        DefectSpec::Density { field } => (ctx.field(entry, &Some(field.clone()), "defect")?.clone(), None),
    };
    let gf = generalized_force(&density, sigma2).map_err(|e| err(&e))?;
    let (beta1, sigma1) = defect_fields(&density, &m).map_err(|e| err(&e))?;
    let beta2 = smooth_fields(sigma2, &m).map_err(|e| err(&e))?;
    let j = interaction_eshelby(&beta1, &sigma1, &beta2, sigma2, &m).map_err(|e| err(&e))?;
    let from_div = force_from_eshelby(&j).map_err(|e| err(&e))?;

    let mut conditions = vec![Condition::exact(
        "Div J^I = (σ₂A)×e₃ (symbolic)",
        0.0,
        from_div.entries == gf.entries,
    )];
    let mut values = BTreeMap::new();
    let target = gf.force();
    let scale = 1.0 + target[0].abs().max(target[1].abs());
    match force_loop_oracle(&j, spec) {
        Ok((lf, spread)) => {
            let diff = (lf[0] - target[0]).abs().max((lf[1] - target[1]).abs());
            conditions.push(Condition::numeric("loop ∮ J^I n vs F^I (oracle)", diff, FORCE_REL_TOL * scale));
            values.insert("loop_force".into(), vec2(lf));
            values.insert("loop_spread".into(), json!(spread));
            if let Some(c) = closed {
                let diff = (lf[0] - c[0]).abs().max((lf[1] - c[1]).abs());
                let tol = FORCE_REL_TOL * (1.0 + c[0].abs().max(c[1].abs()));
                conditions.push(Condition::numeric("loop vs closed form", diff, tol));
            }
        }
        Err(e) => conditions.push(Condition::exact(format!("loop ∮ J^I n: {e}"), f64::INFINITY, false)),
    }
    values.insert("force".into(), vec2(target));
    values.insert(
        "couple".into(),
        json!(gf
            .couple()
            .into_iter()
            .map(|(a, v)| json!({ "alpha": [a.0, a.1], "value": v }))
            .collect::<Vec<_>>()),
    );
    if let Some(c) = closed {
        values.insert("closed_form".into(), vec2(c));
    }
    let report = CheckReport::from_conditions("force", conditions, DegreeReport::default());
    Ok((report, values))
}

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

/// Write `report.txt`, `result.json` and one `<name>.csv` per grid.
pub fn write_artifacts(out: &Path, outcomes: &[Outcome]) -> Result<(), CliError> {
    let io = |p: &Path| {
        let path = p.display().to_string();
        move |source| CliError::Io { path, source }
    };
    std::fs::create_dir_all(out).map_err(io(out))?;
    let text: String = outcomes.iter().map(|o| o.text.as_str()).collect::<Vec<_>>().join("\n");
    let report = out.join("report.txt");
    std::fs::write(&report, text).map_err(io(&report))?;
    let record = ResultRecord {
        scenarios: outcomes.iter().map(|o| o.record.clone()).collect(),
    };
    let json = serde_json::to_string_pretty(&record).expect("records serialize") + "\n";
    let result = out.join("result.json");
    std::fs::write(&result, json).map_err(io(&result))?;
    for o in outcomes {
        if let Some(csv) = &o.grid {
            let p = out.join(format!("{}.csv", file_stem(&o.record.name)));
            std::fs::write(&p, csv).map_err(io(&p))?;
        }
    }
    Ok(())
}
