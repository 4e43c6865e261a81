use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use chiral_core::algebra::{build_algebra, verify_opposite_identifications};
use chiral_core::characters::enumerate_characters;
use chiral_core::chirality::{represented_verdict, self_oppositeness_verdict, semigroup_verdict};
use chiral_core::corpus;
use chiral_core::germ::{build_germ_groupoid, build_universal_groupoid, GermGroupoid};
use chiral_core::groupoid_iso::TwistedGroupoid;
use chiral_core::io::{to_pretty, RepresentationFile, SemigroupFile, TwistFile};
use chiral_core::isotopy::RepresentedSemigroup;
use chiral_core::partial::{mirror_representation, Representation};
use chiral_core::pipeline::run_pipeline;
use chiral_core::search::SearchLimits;
use chiral_core::semigroup::{validate_inverse_semigroup, validate_semigroup, DecoratedSemigroup, InverseSemigroup};
use chiral_core::twist::{induce_cocycle, mirror_twist, validate_twist_data};

use crate::{load, Cli, Command, CorpusAction, Format, Inputs, Level, Model, Object, Outcome};

pub enum CliError {
    /// Bad flag combination; exit code 2.
    Usage(String),
    /// Unreadable or unparseable input, or a refused computation; exit code 1.
    Run(String),
}

impl From<chiral_core::Error> for CliError {
    fn from(e: chiral_core::Error) -> Self {
        CliError::Run(e.to_string())
    }
}

type CliResult = Result<Outcome, CliError>;

pub fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Validate(inputs) => validate(&inputs),
        Command::Build { inputs, which } => build(&inputs, which),
        Command::Chirality { inputs, level, model } => chirality(&inputs, level, model),
        Command::Bridge(inputs) => bridge(&inputs),
        Command::Algebra { inputs, model } => algebra(&inputs, model),
        Command::Export { inputs, object } => export(&inputs, object),
        Command::Fuzz { inputs, rounds } => fuzz(&inputs, rounds, cli.seed),
        Command::Corpus { action } => match action {
            CorpusAction::List => corpus_list(),
            CorpusAction::Write { dir } => corpus_write(&dir),
        },
    }
}

fn limits(inputs: &Inputs) -> SearchLimits {
    if inputs.force {
        SearchLimits::forced()
    } else {
        SearchLimits::default()
    }
}

fn no_dot(inputs: &Inputs) -> Result<(), CliError> {
    if inputs.format == Format::Dot {
        return Err(CliError::Usage("--format dot is only available for build".into()));
    }
    Ok(())
}

fn outcome(ok: bool) -> Outcome {
    if ok {
        Outcome::Ok
    } else {
        Outcome::Failed
    }
}

/// Prints `value` as JSON or as indented `key: value` text.
fn emit(format: Format, value: &Value) {
    match format {
        Format::Text => print!("{}", to_text(value)),
        _ => print!("{}", to_pretty(value)),
    }
}

/// One line per scalar field; objects and arrays of objects nest by indentation.
pub fn to_text(value: &Value) -> String {
    let mut out = String::new();
    write_text(&mut out, value, 0);
    out
}

fn write_text(out: &mut String, value: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                if is_nested(v) {
                    let _ = writeln!(out, "{pad}{k}:");
                    write_text(out, v, depth + 1);
                } else {
                    let _ = writeln!(out, "{pad}{k}: {v}");
                }
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                if is_nested(v) {
                    let _ = writeln!(out, "{pad}[{i}]:");
                    write_text(out, v, depth + 1);
                } else {
                    let _ = writeln!(out, "{pad}[{i}]: {v}");
                }
            }
        }
        _ => {
            let _ = writeln!(out, "{pad}{value}");
        }
    }
}

fn is_nested(v: &Value) -> bool {
    match v {
        Value::Object(m) => !m.is_empty(),
        Value::Array(a) => a.iter().any(|x| x.is_object()),
        _ => false,
    }
}

fn validate(inputs: &Inputs) -> CliResult {
    no_dot(inputs)?;
    let file = load::semigroup_file(inputs)?;
    let mut report = serde_json::Map::new();
    let mut ok = true;

    let table_report = match &file.star {
        Some(star) => validate_inverse_semigroup(&file.table, star)?,
        None => validate_semigroup(&file.table)?,
    };
    ok &= table_report.is_valid();
    report.insert(
        "semigroup".into(),
        json!({
            "kind": if file.is_inverse() { "inverse" } else { "plain" },
            "elements": file.elements.len(),
            "valid": table_report.is_valid(),
            "violations": table_report.violations.iter().map(|v| json!({"witness": v, "message": v.to_string()})).collect::<Vec<_>>(),
        }),
    );

    if table_report.is_valid() && file.decoration.is_some() {
        let d = file.to_decorated();
        ok &= d.is_ok();
        report.insert(
            "decoration".into(),
            json!({"valid": d.is_ok(), "error": d.err().map(|e| e.to_string())}),
        );
    }

    let needs_inverse = inputs.twist.is_some() || inputs.rep.is_some();
    if needs_inverse && !file.is_inverse() {
        return Err(CliError::Run(format!(
            "{}: twist and representation checks need a star field",
            inputs.input.display()
        )));
    }
    if needs_inverse && table_report.is_valid() {
        let s = file.to_inverse()?;
        if inputs.twist.is_some() {
            let omega = load::twist(inputs, &s)?;
            let tr = validate_twist_data(&s, &omega)?;
            ok &= tr.is_valid();
            report.insert(
                "twist".into(),
                json!({
                    "valid": tr.is_valid(),
                    "violations": tr.violations.iter().map(|v| json!({"witness": v, "message": v.to_string()})).collect::<Vec<_>>(),
                }),
            );
        }
        if inputs.rep.is_some() {
            let rep = load::representation(inputs, &s);
            let valid = rep.is_ok();
            ok &= valid;
            let error = match rep {
                Ok(_) => None,
                Err(CliError::Run(m) | CliError::Usage(m)) => Some(m),
            };
            report.insert("representation".into(), json!({"valid": valid, "error": error}));
        }
    }
    report.insert("valid".into(), json!(ok));
    emit(inputs.format, &Value::Object(report));
    Ok(outcome(ok))
}

fn germ_model(inputs: &Inputs, s: &InverseSemigroup, model: Model) -> Result<GermGroupoid, CliError> {
    Ok(match model {
        Model::Universal => build_universal_groupoid(s)?,
        Model::Germ => build_germ_groupoid(s, &load::representation(inputs, s)?)?,
    })
}

/// The groupoid of `model` with the cocycle induced by the (validated) twist.
fn twisted_model(inputs: &Inputs, s: &InverseSemigroup, model: Model) -> Result<TwistedGroupoid, CliError> {
    let omega = load::twist(inputs, s)?;
    let tr = validate_twist_data(s, &omega)?;
    if let Some(v) = tr.violations.first() {
        return Err(CliError::Run(format!("invalid twist: {v}")));
    }
    let germs = germ_model(inputs, s, model)?;
    let sigma = induce_cocycle(&germs, &omega)?;
    Ok(TwistedGroupoid::new(germs.groupoid().clone(), sigma)?)
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("{n} {word}")
    } else {
        format!("{n} {word}s")
    }
}

fn build(inputs: &Inputs, which: Model) -> CliResult {
    let s = load::inverse_semigroup(inputs)?;
    // Germ construction visits every (element, unit) pair.
    let units = match which {
        Model::Universal => s.idempotents().len(),
        Model::Germ => load::representation(inputs, &s)?.carrier(),
    };
    limits(inputs).check((s.order() * units) as f64)?;
    let germs = germ_model(inputs, &s, which)?;
    let g = germs.groupoid();
    let bisections = germs.check_bisections().is_ok();
    let stats = format!(
        "{}, {}, bisections {}",
        plural(g.unit_count(), "unit"),
        plural(g.arrow_count(), "arrow"),
        if bisections { "verified" } else { "FAILED" }
    );
    let name = match which {
        Model::Universal => "universal",
        Model::Germ => "germ",
    };
    match inputs.format {
        Format::Json => {
            eprintln!("{stats}");
            print!("{}", to_pretty(&g.to_json()));
        }
        Format::Dot => {
            eprintln!("{stats}");
            print!("{}", g.to_dot(name));
        }
        Format::Text => {
            println!("{stats}");
            for (id, a) in g.arrows().iter().enumerate() {
                println!("{id}: {} -> {} [{}]", a.src, a.rng, a.label);
            }
        }
    }
    Ok(outcome(bisections))
}

fn chirality(inputs: &Inputs, level: Level, model: Model) -> CliResult {
    no_dot(inputs)?;
    let w = load::weights(inputs)?;
    let lim = limits(inputs);
    match level {
        Level::Semigroup => {
            let file = load::semigroup_file(inputs)?;
            let d = match file.decoration {
                Some(_) => file.to_decorated()?,
                None => DecoratedSemigroup::undecorated(file.to_semigroup()?),
            };
            let (report, _) = semigroup_verdict(&d, &w, lim)?;
            emit(inputs.format, &report.to_json());
            Ok(Outcome::Ok)
        }
        Level::Represented => {
            let s = load::inverse_semigroup(inputs)?;
            let rho = load::representation(inputs, &s)?;
            let rs = RepresentedSemigroup::new(s, rho)?;
            let (report, _) = represented_verdict(&rs, &w, lim)?;
            emit(inputs.format, &report.to_json());
            Ok(Outcome::Ok)
        }
        Level::Groupoid => {
            let s = load::inverse_semigroup(inputs)?;
            let tg = twisted_model(inputs, &s, model)?;
            let verdict = self_oppositeness_verdict(&tg, &w, lim)?;
            let mut out = verdict.report.to_json();
            let pullback_ok = verdict.pullback.as_ref().map_or(true, |p| p.passed());
            out["algebra"] = json!({
                "witness_pullback": verdict.pullback.as_ref().map(|p| json!({"passed": p.passed(), "failure": p.failure})),
            });
            emit(inputs.format, &out);
            Ok(outcome(pullback_ok))
        }
    }
}

fn bridge(inputs: &Inputs) -> CliResult {
    no_dot(inputs)?;
    let s = load::inverse_semigroup(inputs)?;
    let omega = load::twist(inputs, &s)?;
    let rho = load::representation(inputs, &s)?;
    let w = load::weights(inputs)?;
    let report = run_pipeline(&s, &omega, &rho, &w, limits(inputs))?;
    match inputs.format {
        Format::Text => print!("{}", report.to_text()),
        _ => print!("{}", to_pretty(&report.to_json())),
    }
    Ok(outcome(report.passed()))
}

fn algebra(inputs: &Inputs, model: Model) -> CliResult {
    no_dot(inputs)?;
    let s = load::inverse_semigroup(inputs)?;
    let tg = twisted_model(inputs, &s, model)?;
    let alg = build_algebra(&tg)?;
    let verified = alg.verify();
    let opposite = verify_opposite_identifications(&tg, limits(inputs))?;
    let out = json!({
        "algebra": alg.to_json(),
        "verified": verified.is_ok(),
        "violation": verified.as_ref().err().map(|v| format!("{v:?}")),
        "opposite": opposite,
    });
    emit(inputs.format, &out);
    Ok(outcome(verified.is_ok() && opposite.reversed_twist_equal))
}

fn export(inputs: &Inputs, object: Object) -> CliResult {
    no_dot(inputs)?;
    let value = match object {
        Object::Semigroup | Object::Mirror => {
            let file = load::semigroup_file(inputs)?;
            let file = match (object, file.is_inverse()) {
                (Object::Semigroup, _) => file,
                (_, true) => SemigroupFile::from_inverse(&file.to_inverse()?.mirror()),
                (_, false) => SemigroupFile::from_decorated(&file.to_decorated()?.mirror()),
            };
            serde_json::to_value(file).expect("serializable")
        }
        Object::Representation => {
            let s = load::inverse_semigroup(inputs)?;
            let rho = load::representation(inputs, &s)?;
            serde_json::to_value(RepresentationFile::from_representation(&rho)).expect("serializable")
        }
        Object::MirrorRepresentation => {
            let s = load::inverse_semigroup(inputs)?;
            let rho = load::representation(inputs, &s)?;
            let m = mirror_representation(&s, &rho);
            let trivial = m.coincides_with_original;
            let rep = Representation::new(&s.mirror(), rho.carrier(), m.images)?;
            let mut v = serde_json::to_value(RepresentationFile::from_representation(&rep)).expect("serializable");
            v["coincides_with_original"] = json!(trivial);
            v
        }
        Object::Twist | Object::MirrorTwist => {
            let s = load::inverse_semigroup(inputs)?;
            let omega = load::twist(inputs, &s)?;
            let omega = if object == Object::MirrorTwist {
                mirror_twist(&s, &omega)?
            } else {
                omega
            };
            serde_json::to_value(TwistFile::from_twist(&omega)).expect("serializable")
        }
        Object::Characters => {
            let s = load::inverse_semigroup(inputs)?;
            let space = enumerate_characters(&s)?;
            let chars: Vec<Vec<u8>> = space
                .characters()
                .iter()
                .map(|c| c.values().iter().map(|&b| b as u8).collect())
                .collect();
            json!({"format": 1, "idempotents": space.idempotents(), "characters": chars})
        }
        Object::Cocycle => {
            let s = load::inverse_semigroup(inputs)?;
            twisted_model(inputs, &s, Model::Universal)?.cocycle.to_json()
        }
        Object::Algebra => {
            let s = load::inverse_semigroup(inputs)?;
            build_algebra(&twisted_model(inputs, &s, Model::Universal)?)?.to_json()
        }
    };
    emit(inputs.format, &value);
    Ok(Outcome::Ok)
}

/// Mutates one table entry per round and checks that the validator's verdict
/// agrees with rebuilding the semigroup from the mutated table.
fn fuzz(inputs: &Inputs, rounds: usize, seed: u64) -> CliResult {
    no_dot(inputs)?;
    let file = load::semigroup_file(inputs)?;
    let star = file
        .star
        .clone()
        .ok_or_else(|| CliError::Run("fuzz needs an inverse semigroup file".into()))?;
    let n = file.elements.len();
    if n < 2 {
        return Err(CliError::Usage("fuzz needs at least 2 elements".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut valid, mut invalid, mut inconsistent) = (0usize, 0usize, Vec::new());
    for round in 0..rounds {
        let mut table = file.table.clone();
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let mut v = rng.gen_range(0..n - 1);
        if v >= table[i][j] {
            v += 1;
        }
        table[i][j] = v;
        let report = validate_inverse_semigroup(&table, &star)?;
        let rebuilt = InverseSemigroup::new(&table, &star).is_ok();
        if report.is_valid() {
            valid += 1;
        } else {
            invalid += 1;
        }
        if report.is_valid() != rebuilt {
            inconsistent.push(json!({"round": round, "cell": [i, j], "value": v}));
        }
    }
    let ok = inconsistent.is_empty();
    emit(
        inputs.format,
        &json!({"seed": seed, "rounds": rounds, "valid": valid, "invalid": invalid, "inconsistent": inconsistent}),
    );
    Ok(outcome(ok))
}

fn corpus_list() -> CliResult {
    for inst in corpus::standard_corpus() {
        let twists: Vec<&str> = inst.twists.iter().map(|(name, _)| *name).collect();
        println!("{}\t{}\t{}", inst.name, inst.semigroup.order(), twists.join(","));
    }
    println!("l2-decorated\t2\t");
    Ok(Outcome::Ok)
}

fn write(dir: &Path, name: &str, text: String) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, text).map_err(|e| CliError::Run(format!("{}: {e}", path.display())))
}

fn corpus_write(dir: &Path) -> CliResult {
    fs::create_dir_all(dir).map_err(|e| CliError::Run(format!("{}: {e}", dir.display())))?;
    for inst in corpus::standard_corpus() {
        write(dir, &format!("{}.json", inst.name), to_pretty(&SemigroupFile::from_inverse(&inst.semigroup)))?;
        for (name, omega) in inst.twists.iter().filter(|(_, w)| !w.is_trivial()) {
            write(dir, &format!("{}.{name}.twist.json", inst.name), to_pretty(&TwistFile::from_twist(omega)))?;
        }
    }
    write(dir, "l2-decorated.json", to_pretty(&SemigroupFile::from_decorated(&corpus::left_zero_decorated())))?;
    Ok(Outcome::Ok)
}
