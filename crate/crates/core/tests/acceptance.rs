//! The twelve acceptance criteria, one PASS/FAIL line each.

mod oracle;
mod support;

use std::process::{Command as Process, ExitCode};
use std::time::{Duration, Instant};

use extcat::cliio::{run, Command, RunOptions, Status};
use extcat::coeffsys::{ABimodule, AlgebraPrecosheaf, RightAModule};
use extcat::constructions::{degeneration_iso, extension_algebra, extension_layout, gr_am, phi_check, Degeneration, ExtElement};
use extcat::exactlin::{Field, Matrix, PrimeField, Rationals};
use extcat::extcheck::{build_module_extension, check_extension};
use extcat::fdalgebra::{AlgModule, FDAlgebra, Side};
use extcat::fincat::FinCategory;
use extcat::homengine::{cohomology_dims, group_cohomology_dims, nerve_cohomology_dims, CatModule, FiniteAbelianGroup, GroupModule};
use extcat::lhsengine::{h_local_system, lhs_report, lift_independence, LhsSetup, LhsVerdict};
use support::{f2, load};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn trivial_pair<K: Field>(alg: FDAlgebra<K>, m: AlgModule<K>) -> (AlgebraPrecosheaf<K>, ABimodule<K>) {
    let k = alg.field().clone();
    let pre = AlgebraPrecosheaf::constant(&FinCategory::trivial(), &alg);
    let dim = m.dim;
    (pre, ABimodule { modules: vec![m], maps: vec![Matrix::identity(&k, dim)] })
}

fn degeneration_trivial_ext() -> Outcome {
    let mut checked = 0;
    let q = Rationals;
    let (pre, bimod) = trivial_pair(FDAlgebra::ground(&q), AlgModule::regular(&FDAlgebra::ground(&q), Side::Bi));
    let v = degeneration_iso(Degeneration::TrivialExt, &pre, &bimod).map_err(|e| e.to_string())?;
    ensure(v.passed, || format!("(Q, Q): {:?}", v.witness))?;
    let ext = extension_algebra(&pre, &bimod);
    let dual = FDAlgebra::dual_numbers(&q);
    ensure(ext.structure() == dual.structure() && ext.unit() == dual.unit(), || "(Q, Q) is not the dual numbers".into())?;
    checked += v.checked;

    let k = f2();
    let g = FDAlgebra::group_algebra(&k, &[2]).unwrap();
    let (pre, bimod) = trivial_pair(g.clone(), AlgModule::regular(&g, Side::Bi));
    let v = degeneration_iso(Degeneration::TrivialExt, &pre, &bimod).map_err(|e| e.to_string())?;
    ensure(v.passed, || format!("F2[Z/2]: {:?}", v.witness))?;
    checked += v.checked;

    let split = FDAlgebra::split(&k, 2);
    let one = Matrix::identity(&k, 1);
    let zero = Matrix::zeros(&k, 1, 1);
    let projection = AlgModule { side: Side::Bi, dim: 1, left: vec![one.clone(), zero.clone()], right: vec![one, zero] };
    let (pre, bimod) = trivial_pair(split, projection);
    ensure(bimod.validate(&pre).is_valid(), || "projection bimodule invalid".into())?;
    let v = degeneration_iso(Degeneration::TrivialExt, &pre, &bimod).map_err(|e| e.to_string())?;
    ensure(v.passed, || format!("F2 x F2: {:?}", v.witness))?;
    checked += v.checked;
    Ok(format!("3 cases, {checked} structure-constant slots equal"))
}

fn degeneration_skew() -> Outcome {
    let mut checked = 0;
    for name in ["a2_zero.toml", "cyclic_zero.toml"] {
        let p = load(name, f2());
        let pre = p.precosheaf.as_ref().unwrap();
        let zero = ABimodule::zero(pre);
        let v = degeneration_iso(Degeneration::Skew, pre, &zero).map_err(|e| e.to_string())?;
        ensure(v.passed, || format!("{name}: {:?}", v.witness))?;
        checked += v.checked;
    }
    Ok(format!("A2 and cyclic monoid, {checked} products equal"))
}

fn unit_check<K: Field>(pre: &AlgebraPrecosheaf<K>, bimod: &ABimodule<K>) -> Result<usize, String> {
    let k = pre.field();
    let alg = extension_algebra(pre, bimod);
    let report = alg.validate();
    ensure(report.is_valid(), || report.to_string())?;
    let layout = extension_layout(pre, bimod);
    let mut unit = k.zero_vec(alg.dim());
    for x in 0..pre.base.num_objects() {
        let e = ExtElement::<K>::spanning(pre.base.identity(x), pre.algebras[x].unit().clone(), k.zero_vec(bimod.dim_at(x)));
        unit = k.vec_add(&unit, &e.to_vector(k, &layout));
    }
    ensure(&unit == alg.unit(), || "stored unit is not the sum of identities".into())?;
    for i in 0..alg.dim() {
        let b = alg.basis(i);
        ensure(alg.mul(&unit, &b) == b && alg.mul(&b, &unit) == b, || format!("unit fails on {}", alg.labels()[i]))?;
    }
    Ok(alg.dim().pow(3))
}

fn associativity_and_unit() -> Outcome {
    let mut triples = 0;
    let mut fixtures = 0;
    for name in ["a2_regular.toml", "cyclic_regular.toml", "point.toml", "a2_zero.toml"] {
        let p = load(name, f2());
        let pre = p.precosheaf.as_ref().unwrap();
        triples += unit_check(pre, &p.effective_bimodule().unwrap()).map_err(|e| format!("{name}: {e}"))?;
        fixtures += 1;
    }
    for name in ["rational_poset.toml", "dual_numbers.toml"] {
        let p = load(name, Rationals);
        let pre = p.precosheaf.as_ref().unwrap();
        triples += unit_check(pre, &p.effective_bimodule().unwrap()).map_err(|e| format!("{name}: {e}"))?;
        fixtures += 1;
    }
    Ok(format!("{fixtures} fixtures, {triples} basis triples"))
}

fn phi_anti_homomorphism() -> Outcome {
    let mut parts = Vec::new();
    for name in ["a2_regular.toml", "cyclic_regular.toml"] {
        let p = load(name, f2());
        let pre = p.precosheaf.as_ref().unwrap();
        let bimod = p.bimodule.as_ref().unwrap();
        ensure(!bimod.is_zero(), || format!("{name}: bimodule is zero"))?;
        let gr = gr_am(pre, bimod).map_err(|e| e.to_string())?;
        let v = phi_check(pre, bimod, &gr);
        ensure(v.passed, || format!("{name}: {:?}", v.witness))?;
        ensure(v.checked >= 100, || format!("{name}: only {} pairs", v.checked))?;
        parts.push(format!("{name} {} pairs", v.checked));
    }
    Ok(parts.join(", "))
}

fn extension_of_categories() -> Outcome {
    let mut parts = Vec::new();
    for name in ["a2_zero.toml", "a2_regular.toml", "cyclic_regular.toml", "point.toml"] {
        let p = load(name, f2());
        let pre = p.precosheaf.as_ref().unwrap();
        let rmod: RightAModule<PrimeField> = p.effective_right_module().unwrap();
        let e = build_module_extension(pre, &rmod).map_err(|e| e.to_string())?;
        let r = check_extension(&e).map_err(|e| e.to_string())?;
        ensure(r.is_valid(), || format!("{name}: {r}"))?;
        parts.push(format!("{name} ({} morphisms)", e.total.num_morphisms()));
    }
    Ok(parts.join(", "))
}

fn oracle_equivalence() -> Outcome {
    let k = f2();
    let cases = [
        ("A2", FinCategory::poset_a2(), vec![1, 0, 0, 0]),
        ("discrete(2)", FinCategory::discrete(2), vec![2, 0, 0, 0]),
        ("Z/2", FinCategory::one_object_group(&[2]).unwrap(), vec![1, 1, 1, 1]),
    ];
    for (name, c, expected) in cases {
        let f = CatModule::constant(&c, &k);
        let nerve = nerve_cohomology_dims(&c, &f, &k, 3, false).map_err(|e| e.to_string())?;
        let res = cohomology_dims(&c, &f, 3).map_err(|e| e.to_string())?;
        ensure(nerve == expected && res == expected, || format!("{name}: nerve {nerve:?}, resolution {res:?}, expected {expected:?}"))?;
    }
    Ok("A2, discrete(2), Z/2 agree for n <= 3".into())
}

fn group_closed_form() -> Outcome {
    for p in [2u32, 3] {
        let k = PrimeField::new(p).unwrap();
        let g = FiniteAbelianGroup::cyclic_product(&[p as usize]).unwrap();
        let dims = group_cohomology_dims(&g, &GroupModule::trivial(&g, &k, 1), &k, 4).map_err(|e| e.to_string())?;
        ensure(dims == vec![1; 5], || format!("Z/{p} over F_{p}: {dims:?}"))?;
        let m = oracle::abelian_group(&[p as usize]);
        let brute = oracle::monoid_cohomology(&m, &oracle::trivial_action(&m, 1), 1, p as u64, 4);
        ensure(brute == dims, || format!("oracle disagrees: {brute:?}"))?;
    }
    let k = PrimeField::new(3).unwrap();
    let g = FiniteAbelianGroup::cyclic_product(&[2]).unwrap();
    let dims = group_cohomology_dims(&g, &GroupModule::trivial(&g, &k, 1), &k, 4).map_err(|e| e.to_string())?;
    ensure(dims == vec![1, 0, 0, 0, 0], || format!("Z/2 over F_3: {dims:?}"))?;
    Ok("Z/2, Z/3 over their own characteristic; Z/2 over F_3".into())
}

fn lhs_for(name: &str, field: PrimeField, caps: (usize, usize, usize)) -> Result<extcat::lhsengine::SpectralReport, String> {
    let p = load(name, field);
    let pre = p.precosheaf.as_ref().unwrap();
    let rmod = p.effective_right_module().unwrap();
    let setup = LhsSetup::new(pre, &rmod).map_err(|e| e.to_string())?;
    let g = CatModule::constant(&setup.base.category, &p.field);
    let f = CatModule::constant(&setup.total.category, &p.field);
    lhs_report(pre, &rmod, &g, &f, caps).map_err(|e| format!("{name}: {e}"))
}

fn lhs_zero_module() -> Outcome {
    for name in ["a2_zero.toml", "cyclic_zero.toml"] {
        let r = lhs_for(name, f2(), (3, 3, 3))?;
        ensure(r.e2[0] == r.abutment, || format!("{name}: row 0 {:?}, abutment {:?}", r.e2[0], r.abutment))?;
        ensure(r.degrees.iter().all(|d| d.verdict == LhsVerdict::Equal), || format!("{name}: {:?}", r.degrees))?;
    }
    Ok("A2 and cyclic monoid, n <= 3 all equal".into())
}

/// Every fiber `N(x)` is an F_p vector space, of order `p^dim`; the order is
/// prime to `p` exactly when the fiber is zero.
fn fibers_coprime(p: &extcat::cliio::Problem<PrimeField>) -> bool {
    let rmod = p.effective_right_module().unwrap();
    rmod.modules.iter().all(|m| m.dim == 0)
}

fn lhs_coprime_fibers() -> Outcome {
    let candidates = [("a2_zero.toml", 2), ("cyclic_zero.toml", 2), ("point.toml", 2), ("a2_regular.toml", 2), ("f3_semisimple.toml", 3), ("f3_point.toml", 3)];
    let mut used = Vec::new();
    let mut excluded = Vec::new();
    for (name, p) in candidates {
        let field = PrimeField::new(p).unwrap();
        if !fibers_coprime(&load(name, field)) {
            excluded.push(name);
            continue;
        }
        let r = lhs_for(name, field, (2, 2, 2))?;
        ensure(r.higher_rows_vanish(), || format!("{name}: rows q > 0 are {:?}", &r.e2[1..]))?;
        ensure(r.degrees.iter().all(|d| d.verdict == LhsVerdict::Equal), || format!("{name}: {:?}", r.degrees))?;
        used.push(name);
    }
    ensure(used.len() >= 2, || "fewer than two fixtures satisfy the premise".into())?;
    Ok(format!("checked {}; premise fails (fiber order p^dim) for {}", used.join(", "), excluded.join(", ")))
}

fn lhs_subquotient_bound() -> Outcome {
    let r = lhs_for("point.toml", f2(), (2, 2, 2))?;
    ensure(r.degrees.iter().all(|d| matches!(d.verdict, LhsVerdict::Equal | LhsVerdict::Bounded)), || format!("{:?}", r.degrees))?;
    let brute = oracle::PointFixture::new();
    let e2 = brute.e2(2, 2);
    ensure(r.e2 == e2, || format!("E2 {:?} against oracle {:?}", r.e2, e2))?;
    let ab = brute.abutment(2);
    ensure(r.abutment == ab, || format!("abutment {:?} against oracle {:?}", r.abutment, ab))?;
    let verdicts: Vec<String> = r.degrees.iter().map(|d| format!("{:?}", d.verdict).to_lowercase()).collect();
    Ok(format!("E2 {:?} = oracle, verdicts {}", r.e2, verdicts.join("/")))
}

fn lift_independence_check() -> Outcome {
    let p = load("point.toml", f2());
    let pre = p.precosheaf.as_ref().unwrap();
    let rmod = p.effective_right_module().unwrap();
    let setup = LhsSetup::new(pre, &rmod).map_err(|e| e.to_string())?;
    let f = CatModule::constant(&setup.total.category, &p.field);
    let mut total = 0;
    for q in 0..=2 {
        let h = h_local_system(&setup, &f, q).map_err(|e| e.to_string())?;
        total += lift_independence(&setup, &f, &h).map_err(|e| format!("q = {q}: {e}"))?;
    }
    Ok(format!("{total} lifts compared for q <= 2"))
}

fn negative_controls() -> Outcome {
    // Every single-entry mutation of the Z/3 table is caught.
    let base = FinCategory::one_object_group(&[3]).unwrap();
    let mut mutations = 0;
    for f in 1..3 {
        for g in 1..3 {
            let good = base.compose(f, g).unwrap();
            for h in (0..3).filter(|&h| h != good) {
                let mut c = base.clone();
                c.set_composite(f, g, h);
                let r = c.validate();
                ensure(!r.is_valid() && !r.violations[0].witness.is_empty(), || format!("mutation ({f},{g}) -> {h} missed"))?;
                mutations += 1;
            }
        }
    }
    // Zeroing any non-unit action matrix of the regular bimodule is caught.
    let p = load("a2_regular.toml", f2());
    let pre = p.precosheaf.as_ref().unwrap();
    let bimod = p.bimodule.as_ref().unwrap();
    let mut corruptions = 0;
    for x in 0..bimod.modules.len() {
        for i in 1..bimod.modules[x].left.len() {
            for side in [Side::Left, Side::Right] {
                let mut bad = bimod.clone();
                let d = bad.modules[x].dim;
                let acts = if side == Side::Left { &mut bad.modules[x].left } else { &mut bad.modules[x].right };
                acts[i] = Matrix::zeros(&p.field, d, d);
                let r = bad.validate(pre);
                ensure(!r.is_valid(), || format!("corrupted {side:?} action at object {x} missed"))?;
                corruptions += 1;
            }
        }
    }
    // Through the command surface, with exit status 1.
    let exe = env!("CARGO_BIN_EXE_extcat");
    for name in ["broken_category.toml", "corrupted_bimodule.toml"] {
        let report = run(&support::spec(name), Some(Command::Validate), &RunOptions::default());
        ensure(report.status == Status::Violation, || format!("{name}: status {:?}", report.status))?;
        ensure(report.checks.iter().any(|c| !c.passed && !c.witnesses.is_empty()), || format!("{name}: no witness"))?;
        let out = Process::new(exe).args(["validate", support::fixture_path(name).to_str().unwrap()]).output().map_err(|e| e.to_string())?;
        ensure(out.status.code() == Some(1), || format!("{name}: exit {:?}", out.status.code()))?;
    }
    Ok(format!("{mutations} table mutations, {corruptions} action corruptions, 2 files with exit 1"))
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Duration, fn() -> Outcome)> = vec![
        ("degeneration to the trivial extension", Duration::from_secs(1), degeneration_trivial_ext),
        ("degeneration to the skew algebra", Duration::from_secs(1), degeneration_skew),
        ("associativity and unit of the extension algebra", Duration::from_secs(10), associativity_and_unit),
        ("Phi is an anti-homomorphism", Duration::from_secs(10), phi_anti_homomorphism),
        ("Gr(A, N) is an extension of Gr(A)", Duration::from_secs(30), extension_of_categories),
        ("nerve and resolution cohomology agree", Duration::from_secs(60), oracle_equivalence),
        ("cyclic group cohomology closed forms", Duration::from_secs(30), group_closed_form),
        ("LHS collapse for N = 0", Duration::from_secs(60), lhs_zero_module),
        ("LHS forced collapse for fibers of order prime to p", Duration::from_secs(60), lhs_coprime_fibers),
        ("LHS subquotient bound on the one-object fixture", Duration::from_secs(300), lhs_subquotient_bound),
        ("lift independence of the induced maps", Duration::from_secs(60), lift_independence_check),
        ("negative controls", Duration::from_secs(10), negative_controls),
    ];
    let mut failures = Vec::new();
    for (i, (name, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}, but took {elapsed:?} (limit {limit:?})")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(why) => {
                println!("FAIL {:>2} {name}: {why} [{elapsed:.2?}]", i + 1);
                failures.push(i + 1);
            }
        }
    }
    if failures.is_empty() {
        println!("all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failures:?}");
        ExitCode::FAILURE
    }
}
