use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use super::build::Problem;
use super::report::{Check, Report, Status, Table};
use super::spec::{Command, ModuleBase, ProblemSpec, SchemaIssue, SpecError};
use crate::constructions::{degeneration_iso, extension_algebra, gr_am, phi_check, skew_algebra, Degeneration};
use crate::exactlin::{Field, FieldSpec, PrimeField, Rationals};
use crate::extcheck::{build_module_extension, check_extension};
use crate::fdalgebra::FDAlgebra;
use crate::homengine::{cat_ext_dims, EngineRegistry};
use crate::lhsengine::{h_local_system, lhs_report, lift_independence, LhsSetup, LhsVerdict};

const DEFAULT_CAP: usize = 2;
const RANDOM_SAMPLES: usize = 32;

/// Command-line overrides of the task block.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub cap_p: Option<usize>,
    pub cap_q: Option<usize>,
    pub cap_n: Option<usize>,
    pub engine: Option<String>,
    pub seed: u64,
}

#[derive(Debug, Error)]
pub enum TaskError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Math(#[from] crate::Error),
}

fn missing(what: &str) -> TaskError {
    TaskError::Spec(SpecError::Schema(vec![SchemaIssue::new(what, "required by this command")]))
}

pub trait Task<K: Field>: Send + Sync {
    fn command(&self) -> Command;
    fn run(&self, problem: &Problem<K>, opts: &RunOptions, report: &mut Report) -> Result<(), TaskError>;
}

/// Tasks by command.
pub struct TaskRegistry<K: Field> {
    tasks: BTreeMap<Command, Box<dyn Task<K>>>,
}

impl<K: Field> Default for TaskRegistry<K> {
    fn default() -> Self {
        let mut reg = TaskRegistry { tasks: BTreeMap::new() };
        reg.register(Box::new(ValidateTask));
        reg.register(Box::new(BuildAlgebraTask));
        reg.register(Box::new(DegenerationTask));
        reg.register(Box::new(ExtensionTask));
        reg.register(Box::new(CohomologyTask));
        reg.register(Box::new(ExtTask));
        reg.register(Box::new(LhsTask));
        reg
    }
}

impl<K: Field> TaskRegistry<K> {
    pub fn register(&mut self, task: Box<dyn Task<K>>) {
        self.tasks.insert(task.command(), task);
    }

    pub fn get(&self, command: Command) -> Option<&dyn Task<K>> {
        self.tasks.get(&command).map(|t| t.as_ref())
    }

    pub fn commands(&self) -> Vec<Command> {
        self.tasks.keys().copied().collect()
    }
}

/// Runs one command on a parsed spec. Every failure ends up in the report.
pub fn run(spec: &ProblemSpec, command: Option<Command>, opts: &RunOptions) -> Report {
    let field_name = spec.field.to_string();
    let Some(command) = command.or_else(|| spec.task.as_ref().and_then(|t| t.command)) else {
        return Report::input_error("none", field_name, vec!["no command given".into()]);
    };
    match spec.field {
        FieldSpec::Rationals => run_with(spec, Rationals, command, opts),
        FieldSpec::PrimeField { characteristic } => match PrimeField::new(characteristic) {
            Ok(k) => run_with(spec, k, command, opts),
            Err(e) => Report::input_error(command.name(), field_name, vec![format!("field: {e}")]),
        },
    }
}

fn run_with<K: Field>(spec: &ProblemSpec, field: K, command: Command, opts: &RunOptions) -> Report {
    let mut report = Report::new(command.name(), field.spec().to_string());
    let problem = match Problem::build(spec, field) {
        Ok(p) => p,
        Err(e) => return Report::input_error(command.name(), report.field, diagnostics(&TaskError::Spec(e))),
    };
    let registry = TaskRegistry::<K>::default();
    let task = registry.get(command).expect("every command is registered");
    if let Err(e) = task.run(&problem, opts, &mut report) {
        report.diagnostics.extend(diagnostics(&e));
        report.status = Status::InputError;
    }
    report
}

fn diagnostics(e: &TaskError) -> Vec<String> {
    match e {
        TaskError::Spec(SpecError::Schema(issues)) => issues.iter().map(|i| i.to_string()).collect(),
        other => vec![other.to_string()],
    }
}

fn caps(problem: &Problem<impl Field>, opts: &RunOptions) -> (usize, usize, usize) {
    let t = problem.spec.task.clone().unwrap_or_default();
    (opts.cap_p.or(t.cap_p).unwrap_or(DEFAULT_CAP), opts.cap_q.or(t.cap_q).unwrap_or(DEFAULT_CAP), opts.cap_n.or(t.cap_n).unwrap_or(DEFAULT_CAP))
}

/// Validates every structure the command needs; `false` when something failed.
fn require_valid<K: Field>(problem: &Problem<K>, report: &mut Report, bimodule: bool, right_module: bool) -> bool {
    report.check(Check::from_validation("category", &problem.category.validate()));
    if report.status != Status::Success {
        return false;
    }
    if let Some(pre) = &problem.precosheaf {
        report.check(Check::from_validation("precosheaf", &pre.validate()));
        if report.status != Status::Success {
            return false;
        }
        if bimodule {
            if let Some(b) = &problem.bimodule {
                report.check(Check::from_validation("bimodule", &b.validate(pre)));
            }
        }
        if right_module {
            if let Some(r) = &problem.right_module {
                report.check(Check::from_validation("right-module", &r.validate(pre)));
            }
        }
    }
    report.status == Status::Success
}

fn precosheaf<K: Field>(problem: &Problem<K>) -> Result<&crate::coeffsys::AlgebraPrecosheaf<K>, TaskError> {
    problem.precosheaf.as_ref().ok_or_else(|| missing("algebras"))
}

struct ValidateTask;

impl<K: Field> Task<K> for ValidateTask {
    fn command(&self) -> Command {
        Command::Validate
    }

    fn run(&self, problem: &Problem<K>, opts: &RunOptions, report: &mut Report) -> Result<(), TaskError> {
        if !require_valid(problem, report, true, true) {
            return Ok(());
        }
        let c = &problem.category;
        for (name, m) in &problem.spec.modules {
            if m.over == ModuleBase::Category {
                let module = problem.module(name, c)?;
                report.check(Check::from_validation(format!("module {name}"), &module.validate(c)));
            }
        }
        let Some(pre) = &problem.precosheaf else { return Ok(()) };
        if report.status != Status::Success {
            return Ok(());
        }
        let bimod = problem.effective_bimodule().expect("algebras present");
        let alg = extension_algebra(pre, &bimod);
        report.check(random_associativity(&alg, opts.seed));
        let gr_modules: Vec<_> = problem.spec.modules.iter().filter(|(_, m)| m.over != ModuleBase::Category).collect();
        if !gr_modules.is_empty() {
            let rmod = problem.effective_right_module().expect("algebras present");
            let setup = LhsSetup::new(pre, &rmod)?;
            for (name, m) in gr_modules {
                let gr = if m.over == ModuleBase::GrBase { &setup.base } else { &setup.total };
                let module = problem.gr_module(Some(name), gr, m.over)?;
                report.check(Check::from_validation(format!("module {name}"), &module.validate(&gr.category)));
            }
        }
        Ok(())
    }
}

/// Associativity and the unit on random elements of `alg`.
fn random_associativity<K: Field>(alg: &FDAlgebra<K>, seed: u64) -> Check {
    let k = alg.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let range = k.order().map_or(7, |q| q.min(7));
    let element = |rng: &mut ChaCha8Rng| -> Vec<K::Elem> {
        (0..alg.dim())
            .map(|_| match k.order() {
                Some(_) => k.element_at(rng.gen_range(0..range)),
                None => k.from_i64(rng.gen_range(-3..=3)),
            })
            .collect()
    };
    let mut witnesses = Vec::new();
    for sample in 0..RANDOM_SAMPLES {
        let (x, y, z) = (element(&mut rng), element(&mut rng), element(&mut rng));
        if alg.mul(&alg.mul(&x, &y), &z) != alg.mul(&x, &alg.mul(&y, &z)) {
            witnesses.push(format!("sample {sample}: x = {}, y = {}, z = {}", k.format_vec(&x), k.format_vec(&y), k.format_vec(&z)));
        }
        if alg.mul(alg.unit(), &x) != x || alg.mul(&x, alg.unit()) != x {
            witnesses.push(format!("sample {sample}: unit fails on {}", k.format_vec(&x)));
        }
    }
    Check { name: format!("random-associativity (seed {seed})"), passed: witnesses.is_empty(), checked: RANDOM_SAMPLES, witnesses }
}

struct BuildAlgebraTask;

impl<K: Field> Task<K> for BuildAlgebraTask {
    fn command(&self) -> Command {
        Command::BuildAlgebra
    }

    fn run(&self, problem: &Problem<K>, _opts: &RunOptions, report: &mut Report) -> Result<(), TaskError> {
        let pre = precosheaf(problem)?;
        if !require_valid(problem, report, true, false) {
            return Ok(());
        }
        let alg = match &problem.bimodule {
            Some(b) => extension_algebra(pre, b),
            None => skew_algebra(pre),
        };
        report.check(Check::from_validation("algebra-axioms", &alg.validate()));
        algebra_tables(&alg, report);
        Ok(())
    }
}

fn combination<K: Field>(alg: &FDAlgebra<K>, v: &[K::Elem]) -> String {
    let k = alg.field();
    let terms: Vec<String> =
        v.iter().zip(alg.labels()).filter(|(c, _)| !k.is_zero(c)).map(|(c, l)| if k.is_one(c) { l.clone() } else { format!("{}*{l}", k.format(c)) }).collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn algebra_tables<K: Field>(alg: &FDAlgebra<K>, report: &mut Report) {
    let mut basis = Table::new("basis", &["index", "label"]);
    for (i, l) in alg.labels().iter().enumerate() {
        basis.push(vec![i.into(), l.clone().into()]);
    }
    let mut unit = Table::new("unit", &["unit"]);
    unit.push(vec![combination(alg, alg.unit()).into()]);
    let mut products = Table::new("structure-constants", &["left", "right", "product"]);
    for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            let p = alg.basis_product(i, j);
            if !alg.field().vec_is_zero(p) {
                products.push(vec![alg.labels()[i].clone().into(), alg.labels()[j].clone().into(), combination(alg, p).into()]);
            }
        }
    }
    report.tables.extend([basis, unit, products]);
}

struct DegenerationTask;

impl<K: Field> Task<K> for DegenerationTask {
    fn command(&self) -> Command {
        Command::CheckTheoremA
    }

    fn run(&self, problem: &Problem<K>, _opts: &RunOptions, report: &mut Report) -> Result<(), TaskError> {
        let pre = precosheaf(problem)?;
        if !require_valid(problem, report, true, false) {
            return Ok(());
        }
        let bimod = problem.effective_bimodule().expect("algebras present");
        let alg = extension_algebra(pre, &bimod);
        report.check(Check::from_validation("algebra-axioms", &alg.validate()));
        let c = &pre.base;
        if c.num_objects() == 1 && c.num_morphisms() == 1 {
            report.check(Check::from_verdict("degeneration trivial-ext", &degeneration_iso(Degeneration::TrivialExt, pre, &bimod)?));
        }
        if bimod.is_zero() {
            report.check(Check::from_verdict("degeneration skew", &degeneration_iso(Degeneration::Skew, pre, &bimod)?));
        }
        let gr = gr_am(pre, &bimod)?;
        report.check(Check::from_verdict("phi-anti-homomorphism", &phi_check(pre, &bimod, &gr)));
        let mut sizes = Table::new("sizes", &["structure", "dimension or morphisms"]);
        sizes.push(vec!["extension algebra".into(), alg.dim().into()]);
        sizes.push(vec!["Gr(A, M)".into(), gr.category.num_morphisms().into()]);
        sizes.push(vec!["composable pairs".into(), gr.category.num_composable_pairs().into()]);
        report.tables.push(sizes);
        Ok(())
    }
}

struct ExtensionTask;

impl<K: Field> Task<K> for ExtensionTask {
    fn command(&self) -> Command {
        Command::CheckExtension
    }

    fn run(&self, problem: &Problem<K>, _opts: &RunOptions, report: &mut Report) -> Result<(), TaskError> {
        let pre = precosheaf(problem)?;
        if !require_valid(problem, report, true, true) {
            return Ok(());
        }
        let rmod = problem.effective_right_module().expect("algebras present");
        let e = build_module_extension(pre, &rmod)?;
        let mut check = Check::from_validation("extension", &check_extension(&e)?);
        check.checked = e.total.num_morphisms() * e.total.num_morphisms();
        report.check(check);
        let mut sizes = Table::new("sizes", &["category", "objects", "morphisms"]);
        for (name, cat) in [("kernel", &e.kernel), ("total", &e.total), ("base", &e.base)] {
            sizes.push(vec![name.into(), cat.num_objects().into(), cat.num_morphisms().into()]);
        }
        report.tables.push(sizes);
        Ok(())
    }
}

struct CohomologyTask;

impl<K: Field> Task<K> for CohomologyTask {
    fn command(&self) -> Command {
        Command::Cohomology
    }

    fn run(&self, problem: &Problem<K>, opts: &RunOptions, report: &mut Report) -> Result<(), TaskError> {
        if !require_valid(problem, report, false, false) {
            return Ok(());
        }
        let c = &problem.category;
        let task = problem.spec.task.clone().unwrap_or_default();
        let f = match &task.module {
            Some(name) => problem.module(name, c)?,
            None => crate::homengine::CatModule::constant(c, &problem.field),
        };
        report.check(Check::from_validation("coefficients", &f.validate(c)));
        if report.status != Status::Success {
            return Ok(());
        }
        let (_, _, n) = caps(problem, opts);
        let registry = EngineRegistry::<K>::default();
        let engine = opts.engine.clone().or(task.engine).unwrap_or_else(|| "resolution".into());
        let names: Vec<&str> = if engine == "all" { registry.names() } else { vec![engine.as_str()] };
        let mut results: Vec<(&str, Vec<usize>)> = Vec::new();
        for name in names {
            match registry.get(name)?.cohomology_dims(c, &f, &problem.field, n) {
                Ok(dims) => results.push((name, dims)),
                Err(crate::Error::Unsupported(why)) if engine == "all" => report.diagnostics.push(format!("{name} skipped: {why}")),
                Err(e) => return Err(e.into()),
            }
        }
        let mut columns = vec!["n"];
        columns.extend(results.iter().map(|(name, _)| *name));
        let mut table = Table::new("cohomology", &columns);
        for i in 0..=n {
            let mut row: Vec<Value> = vec![i.into()];
            row.extend(results.iter().map(|(_, d)| Value::from(d[i])));
            table.push(row);
        }
        report.tables.push(table);
        if results.len() > 1 {
            let disagreeing: Vec<String> =
                results.iter().filter(|(_, d)| *d != results[0].1).map(|(name, d)| format!("{name}: {d:?} vs {:?}", results[0].1)).collect();
            report.check(Check { name: "engines-agree".into(), passed: disagreeing.is_empty(), checked: results.len(), witnesses: disagreeing });
        }
        Ok(())
    }
}

struct ExtTask;

impl<K: Field> Task<K> for ExtTask {
    fn command(&self) -> Command {
        Command::Ext
    }

    fn run(&self, problem: &Problem<K>, opts: &RunOptions, report: &mut Report) -> Result<(), TaskError> {
        if !require_valid(problem, report, false, false) {
            return Ok(());
        }
        let c = &problem.category;
        let task = problem.spec.task.clone().unwrap_or_default();
        let g = problem.module(task.source.as_deref().ok_or_else(|| missing("task.source"))?, c)?;
        let f = problem.module(task.target.as_deref().ok_or_else(|| missing("task.target"))?, c)?;
        report.check(Check::from_validation("source", &g.validate(c)));
        report.check(Check::from_validation("target", &f.validate(c)));
        if report.status != Status::Success {
            return Ok(());
        }
        let (_, _, n) = caps(problem, opts);
        let dims = cat_ext_dims(c, &g, &f, n)?;
        let mut table = Table::new("ext", &["n", "dim"]);
        for (i, d) in dims.iter().enumerate() {
            table.push(vec![i.into(), (*d).into()]);
        }
        report.tables.push(table);
        Ok(())
    }
}

struct LhsTask;

impl<K: Field> Task<K> for LhsTask {
    fn command(&self) -> Command {
        Command::LhsReport
    }

    fn run(&self, problem: &Problem<K>, opts: &RunOptions, report: &mut Report) -> Result<(), TaskError> {
        let pre = precosheaf(problem)?;
        if !require_valid(problem, report, true, true) {
            return Ok(());
        }
        let rmod = problem.effective_right_module().expect("algebras present");
        let task = problem.spec.task.clone().unwrap_or_default();
        let setup = LhsSetup::new(pre, &rmod)?;
        let g = problem.gr_module(task.base_module.as_deref(), &setup.base, ModuleBase::GrBase)?;
        let f = problem.gr_module(task.total_module.as_deref(), &setup.total, ModuleBase::GrTotal)?;
        let (cap_p, cap_q, cap_n) = caps(problem, opts);
        let spectral = lhs_report(pre, &rmod, &g, &f, (cap_p, cap_q, cap_n))?;

        let mut lifts = 0;
        let mut lift_failures = Vec::new();
        for q in 0..=cap_q {
            let h = h_local_system(&setup, &f, q)?;
            match lift_independence(&setup, &f, &h) {
                Ok(n) => lifts += n,
                Err(e) => lift_failures.push(format!("q = {q}: {e}")),
            }
        }
        report.check(Check { name: "lift-independence".into(), passed: lift_failures.is_empty(), checked: lifts, witnesses: lift_failures });

        let violations: Vec<String> = spectral
            .degrees
            .iter()
            .filter(|d| d.verdict == LhsVerdict::Violation)
            .map(|d| format!("n = {}: E2 total {} against abutment {}", d.n, d.e2_total, d.abutment))
            .collect();
        report.check(Check { name: "lhs-verdicts".into(), passed: violations.is_empty(), checked: spectral.degrees.len(), witnesses: violations });

        let mut columns = vec!["q".to_string()];
        columns.extend((0..=cap_p).map(|p| format!("p={p}")));
        let mut e2 = Table { name: "e2".into(), columns, rows: Vec::new() };
        for (q, row) in spectral.e2.iter().enumerate() {
            let mut r: Vec<Value> = vec![q.into()];
            r.extend(row.iter().map(|&d| Value::from(d)));
            e2.push(r);
        }
        let mut degrees = Table::new("degrees", &["n", "e2_total", "abutment", "verdict", "forced_collapse"]);
        for d in &spectral.degrees {
            degrees.push(vec![d.n.into(), d.e2_total.into(), d.abutment.into(), json!(d.verdict), d.forced_collapse.into()]);
        }
        let mut sizes = Table::new("sizes", &["category", "morphisms"]);
        sizes.push(vec!["Gr(A)".into(), setup.base.category.num_morphisms().into()]);
        sizes.push(vec!["Gr(A, N)".into(), setup.total.category.num_morphisms().into()]);
        report.tables.extend([e2, degrees, sizes]);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cliio::spec::parse;

    const POINT: &str = r#"
[field]
kind = "prime-field"
characteristic = 2

[category]
preset = "trivial"

[[algebras]]
preset = "ground"

[right_module]
preset = "regular"
"#;

    #[test]
    fn registry_covers_every_command() {
        assert_eq!(TaskRegistry::<PrimeField>::default().commands(), Command::ALL.to_vec());
    }

    #[test]
    fn lhs_on_point_is_equal() {
        let spec = parse(POINT).unwrap();
        let r = run(&spec, Some(Command::LhsReport), &RunOptions::default());
        assert_eq!(r.status, Status::Success, "{}", r.render_table());
        let degrees = r.table_named("degrees").unwrap();
        assert!(degrees.rows.iter().all(|row| row[3] == "equal"));
    }

    #[test]
    fn missing_command_is_input_error() {
        let r = run(&parse(POINT).unwrap(), None, &RunOptions::default());
        assert_eq!(r.status, Status::InputError);
    }

    #[test]
    fn seed_changes_samples_not_verdict() {
        let spec = parse(POINT).unwrap();
        for seed in [0, 7] {
            let r = run(&spec, Some(Command::Validate), &RunOptions { seed, ..Default::default() });
            assert_eq!(r.status, Status::Success);
        }
    }
}
