//! Acceptance criteria 1-8. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mlint::engine::{Mode, RunConfig, RunResult};
use mlint::frontend::{self, SourceUnit};
use mlint::harness::alias::rewrite_aliases;
use mlint::harness::fuzz::{run_fuzz, FuzzGen};
use mlint::harness::{self, analyze, coverage, projects, unit_expectations, verify, Project};
use mlint::semantic::ApiSignatureTable;

const CATALOG_CAP: Duration = Duration::from_secs(1);
const SNIPPET_CAP: Duration = Duration::from_secs(5);
const CORPUS_CAP: Duration = Duration::from_secs(30);
const FUZZ_CAP: Duration = Duration::from_secs(60);
const FUZZ_INPUTS: usize = 10_000;
const FUZZ_SEED: u64 = 0x6d6c_696e_74;
const MIN_FIXTURE_FILES: usize = 88;

type Check = Result<String, String>;

fn crate_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn fixtures() -> PathBuf {
    crate_dir().join("fixtures")
}

fn mlint(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_mlint"))
        .args(args)
        .current_dir(crate_dir())
        .env_remove("MLINT_CONFIG")
        .output()
        .expect("run mlint")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, cap: Duration) -> Result<(), String> {
    ensure(elapsed < cap, || format!("took {elapsed:.2?}, cap {cap:?}"))
}

fn rel(path: &Path) -> String {
    mlint::cli::display_path(path.strip_prefix(fixtures()).unwrap_or(path))
}

fn load_project(p: &Project) -> Vec<SourceUnit> {
    p.files
        .iter()
        .map(|f| frontend::load(f, rel(f)).expect("read fixture"))
        .collect()
}

/// (path, line, rule) of every diagnostic, in engine order.
fn keys(r: &RunResult) -> Vec<(String, u32, &'static str)> {
    r.diagnostics
        .iter()
        .map(|d| (d.path.clone(), d.line, d.rule.id))
        .collect()
}

// Rows of the published catalog: name, stage, effect, type.
const TABLE: [(&str, &str, &str, &str); 22] = [
    ("Unnecessary Iteration", "Data Cleaning", "Efficiency", "Generic"),
    ("NaN Equivalence Comparison Misused", "Data Cleaning", "Error-prone", "Generic"),
    ("Chain Indexing", "Data Cleaning", "Error-prone & Efficiency", "API-Specific: Pandas"),
    ("Columns and DataType Not Explicitly Set", "Data Cleaning", "Readability", "Generic"),
    ("Empty Column Misinitialization", "Data Cleaning", "Robustness", "Generic"),
    ("Merge API Parameter Not Explicitly Set", "Data Cleaning", "Readability & Error-prone", "Generic"),
    ("In-Place APIs Misused", "Data Cleaning", "Error-prone", "Generic"),
    ("Dataframe Conversion API Misused", "Data Cleaning", "Error-prone", "API-Specific: Pandas"),
    ("Matrix Multiplication API Misused", "Data Cleaning", "Readability", "API-Specific: NumPy"),
    ("No Scaling before Scaling-Sensitive Operation", "Feature Engineering", "Error-prone", "Generic"),
    ("Hyperparameter Not Explicitly Set", "Model Training", "Error-prone & Reproducibility", "Generic"),
    ("Memory Not Freed", "Model Training", "Memory Issue", "Generic"),
    ("Deterministic Algorithm Option Not Used", "Model Training", "Reproducibility", "Generic"),
    ("Randomness Uncontrolled", "Model Training & Model Evaluation", "Reproducibility", "Generic"),
    ("Missing the Mask of Invalid Value", "Model Training", "Error-prone", "Generic"),
    ("Broadcasting Feature Not Used", "Model Training", "Efficiency", "Generic"),
    ("TensorArray Not Used", "Model Training", "Efficiency & Error-prone", "API-Specific: TensorFlow 2"),
    ("Training / Evaluation Mode Improper Toggling", "Model Training", "Error-prone", "Generic"),
    ("Pytorch Call Method Misused", "Model Training", "Robustness", "API-Specific: PyTorch"),
    ("Gradients Not Cleared before Backward Propagation", "Model Training", "Error-prone", "API-Specific: PyTorch"),
    ("Data Leakage", "Model Evaluation", "Error-prone", "Generic"),
    ("Threshold-Dependent Validation", "Model Evaluation", "Robustness", "Generic"),
];

fn catalog_completeness() -> Check {
    let start = Instant::now();
    let out = mlint(&["--list-rules"]);
    let elapsed = start.elapsed();
    ensure(out.status.code() == Some(0), || format!("exit {:?}", out.status.code()))?;
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    let rows: Vec<Vec<&str>> = text
        .lines()
        .map(|l| l.split("  ").map(str::trim).filter(|s| !s.is_empty()).collect())
        .collect();
    ensure(rows.len() == 22, || format!("{} rows", rows.len()))?;
    for (i, (row, want)) in rows.iter().zip(TABLE).enumerate() {
        let id = format!("ML{:02}", i + 1);
        let want = [id.as_str(), want.0, want.1, want.2, want.3];
        ensure(row.as_slice() == want, || format!("row {}: {row:?} != {want:?}", i + 1))?;
    }
    let generic = rows.iter().filter(|r| r[4] == "Generic").count();
    let specific = rows.iter().filter(|r| r[4].starts_with("API-Specific: ")).count();
    ensure((generic, specific) == (16, 6), || format!("{generic} generic, {specific} specific"))?;
    within(elapsed, CATALOG_CAP)?;
    Ok(format!("22 rows match the catalog table, 16 generic / 6 API-specific, {elapsed:.2?}"))
}

// (rule, smelly snippet, clean counterpart)
const SNIPPETS: [(&str, &str, &str); 5] = [
    ("ML01", "ML01/positive/iterrows_listing.py", "ML01/negative/vectorized_add.py"),
    ("ML03", "ML03/positive/column_chain.py", "ML03/negative/loc_access.py"),
    ("ML15", "ML15/positive/bare_log.py", "ML15/negative/clipped_log.py"),
    ("ML20", "ML20/positive/missing_zero_grad.py", "ML20/negative/in_order.py"),
    ("ML19", "ML19/positive/self_net_forward.py", "ML19/negative/call_module.py"),
];

fn canonical_examples() -> Check {
    let start = Instant::now();
    let sigs = ApiSignatureTable::bundled();
    let config = RunConfig::default();
    for (rule, red, green) in SNIPPETS {
        for (file, smelly) in [(red, true), (green, false)] {
            let unit = frontend::load(&fixtures().join(file), file).map_err(|e| e.to_string())?;
            let expected: Vec<_> = unit_expectations(&unit)
                .map_err(|e| e.to_string())?
                .into_iter()
                .map(|e| (e.path, e.line, e.rule))
                .collect();
            let result = analyze(std::slice::from_ref(&unit), &sigs, &config);
            let mut actual = keys(&result);
            actual.sort();
            ensure(actual == expected, || format!("{file}: got {actual:?}, want {expected:?}"))?;
            let hits = actual.iter().filter(|k| k.2 == rule).count();
            ensure((hits > 0) == smelly, || format!("{file}: {rule} fired {hits} times"))?;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, SNIPPET_CAP)?;
    Ok(format!("5 smelly/clean snippet pairs exact, {elapsed:.2?}"))
}

fn corpus_verification() -> Check {
    let start = Instant::now();
    let report = verify(&fixtures(), &RunConfig::default());
    let elapsed = start.elapsed();
    ensure(report.passed(), || report.to_string())?;
    ensure(report.files >= MIN_FIXTURE_FILES, || format!("only {} fixture files", report.files))?;
    let cov = coverage(&fixtures()).map_err(|e| e.to_string())?;
    for (id, c) in &cov {
        ensure(c.positive_sites >= 2 && c.negative_files >= 2, || format!("{id}: {c:?}"))?;
    }
    within(elapsed, CORPUS_CAP)?;
    Ok(format!(
        "{} files, {} expected sites, 0 FN, 0 FP, {elapsed:.2?}",
        report.files, report.expected
    ))
}

fn determinism() -> Check {
    for format in ["json", "sarif"] {
        let a = mlint(&["--format", format, "fixtures"]);
        let b = mlint(&["--format", format, "fixtures"]);
        ensure(a.status.code() == Some(1), || format!("{format}: exit {:?}", a.status.code()))?;
        ensure(!a.stdout.is_empty() && a.stdout == b.stdout, || format!("{format} output differs"))?;
    }
    let sigs = ApiSignatureTable::bundled();
    let config = RunConfig::default();
    let load = |dirs: &[&str]| -> Vec<SourceUnit> {
        dirs.iter()
            .flat_map(|d| projects(&fixtures().join(d)))
            .flat_map(|p| load_project(&p))
            .collect()
    };
    let sets = [load(&["."]), load(&["ML13/positive", "ML14/positive"])];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut project_level = 0;
    for units in &sets {
        let base = analyze(units, &sigs, &config).diagnostics;
        project_level += base.iter().filter(|d| matches!(d.rule.id, "ML13" | "ML14")).count();
        let mut perm = units.clone();
        perm.reverse();
        for round in 0..4 {
            let got = analyze(&perm, &sigs, &config).diagnostics;
            ensure(got == base, || format!("permutation {round} changed the diagnostics"))?;
            perm.shuffle(&mut rng);
        }
    }
    ensure(project_level > 0, || "no ML13/ML14 findings to compare".into())?;
    Ok(format!(
        "JSON and SARIF byte-identical across runs; 4 file orders x 2 sets identical ({project_level} ML13/ML14)"
    ))
}

fn mode_gating() -> Check {
    let sigs = ApiSignatureTable::bundled();
    let dev = RunConfig::with_mode(Mode::Development);
    let prod = RunConfig::with_mode(Mode::Production);
    let (mut d, mut p) = (Vec::new(), Vec::new());
    for project in projects(&fixtures()) {
        let units = load_project(&project);
        d.extend(keys(&analyze(&units, &sigs, &dev)));
        p.extend(keys(&analyze(&units, &sigs, &prod)));
    }
    let gated = |k: &(String, u32, &str)| matches!(k.2, "ML13" | "ML14");
    let count = |id: &str| d.iter().filter(|k| k.2 == id).count();
    ensure(count("ML13") > 0 && count("ML14") > 0, || "no seeded ML13/ML14 positives".into())?;
    let mut kept: Vec<_> = d.iter().filter(|k| !gated(k)).cloned().collect();
    kept.sort();
    p.sort();
    ensure(kept == p, || "production run differs from development minus ML13/ML14".into())?;
    Ok(format!(
        "development {} findings ({} ML13, {} ML14), production {}",
        d.len(),
        count("ML13"),
        count("ML14"),
        p.len()
    ))
}

fn uses_ml_library(text: &str) -> bool {
    text.lines().any(|l| {
        let l = l.trim_start();
        ["pandas", "numpy", "torch", "tensorflow"].iter().any(|lib| {
            l.starts_with(&format!("import {lib}")) || l.starts_with(&format!("from {lib}"))
        })
    })
}

fn is_positive(p: &Project) -> bool {
    p.files.iter().any(|f| rel(f).contains("/positive/"))
}

fn alias_robustness() -> Check {
    let sigs = ApiSignatureTable::bundled();
    let config = RunConfig::default();
    let mut variants = 0;
    for project in projects(&fixtures()).into_iter().filter(is_positive) {
        let units = load_project(&project);
        if !units.iter().any(|u| uses_ml_library(&u.text)) {
            continue;
        }
        let mut renamed = Vec::new();
        for u in &units {
            let rw = rewrite_aliases(&u.text).ok_or_else(|| format!("{}: does not lex", u.path))?;
            ensure(
                !uses_ml_library(&u.text) || !rw.renames.is_empty(),
                || format!("{}: nothing renamed", u.path),
            )?;
            renamed.push(frontend::parse(u.path.clone(), rw.text));
        }
        let mut before = keys(&analyze(&units, &sigs, &config));
        let mut after = keys(&analyze(&renamed, &sigs, &config));
        before.sort();
        after.sort();
        ensure(!before.is_empty() && before == after, || {
            format!("{}: {before:?} became {after:?}", units[0].path)
        })?;
        variants += 1;
    }
    ensure(variants > 0, || "no variants".into())?;
    Ok(format!("{variants} alias-rewritten positive projects keep their findings"))
}

fn fuzz() -> Check {
    let seeds: Vec<String> = projects(&fixtures())
        .iter()
        .flat_map(|p| p.files.iter())
        .map(|f| std::fs::read_to_string(f).unwrap_or_default())
        .collect();
    let start = Instant::now();
    let mut g = FuzzGen::new(FUZZ_SEED, seeds);
    let inputs: Vec<Vec<u8>> = (0..FUZZ_INPUTS).map(|_| g.next_input()).collect();
    let out = run_fuzz(inputs, 100);
    let elapsed = start.elapsed();
    ensure(out.inputs == FUZZ_INPUTS, || format!("ran {} inputs", out.inputs))?;
    ensure(out.crashes.is_empty(), || format!("crashes: {:?}", &out.crashes[..out.crashes.len().min(5)]))?;
    within(elapsed, FUZZ_CAP)?;
    Ok(format!("{} inputs ({} parsed), no crash, {elapsed:.2?}", out.inputs, out.parsed))
}

/// Adds `# mlint: disable=` for `ids` to line `line` (1-based).
fn suppress(text: &str, line: u32, ids: &[&str]) -> String {
    let directive = format!("# mlint: disable={}", ids.join(","));
    text.split_inclusive('\n')
        .enumerate()
        .map(|(i, l)| {
            if i as u32 + 1 != line {
                return l.to_string();
            }
            let (body, nl) = l.strip_suffix('\n').map_or((l, ""), |b| (b, "\n"));
            match body.find(harness::EXPECT) {
                Some(at) => format!("{}{directive}  {}{nl}", &body[..at], &body[at..]),
                None => format!("{body}  {directive}{nl}"),
            }
        })
        .collect()
}

fn suppression() -> Check {
    let sigs = ApiSignatureTable::bundled();
    let config = RunConfig::default();
    let mut single = 0;
    let mut flipped = 0;
    for project in projects(&fixtures()).into_iter().filter(is_positive) {
        let units = load_project(&project);
        let base = analyze(&units, &sigs, &config);
        let base_keys = keys(&base);
        let mut all: BTreeMap<(usize, u32), Vec<&str>> = BTreeMap::new();
        for (ui, u) in units.iter().enumerate() {
            for e in unit_expectations(u).map_err(|e| e.to_string())? {
                all.entry((ui, e.line)).or_default().push(e.rule);
                let mut edited = units.clone();
                edited[ui] = frontend::parse(u.path.clone(), suppress(&u.text, e.line, &[e.rule]));
                let r = analyze(&edited, &sigs, &config);
                ensure(r.notices.is_empty(), || format!("{}:{}: {:?}", u.path, e.line, r.notices))?;
                let key = (e.path.clone(), e.line, e.rule);
                let want: Vec<_> = base_keys.iter().filter(|k| **k != key).cloned().collect();
                ensure(want.len() < base_keys.len() && keys(&r) == want, || {
                    format!("{}:{} {}: suppression did not remove exactly that finding", u.path, e.line, e.rule)
                })?;
                single += 1;
            }
        }
        let mut edited = units.clone();
        for ((ui, line), ids) in &all {
            let u = &edited[*ui];
            edited[*ui] = frontend::parse(u.path.clone(), suppress(&u.text, *line, ids));
        }
        let r = analyze(&edited, &sigs, &config);
        ensure(base.exit_code() == 1 && r.exit_code() == 0, || {
            format!("{}: exit {} -> {} ({:?})", units[0].path, base.exit_code(), r.exit_code(), keys(&r))
        })?;
        flipped += 1;
    }

    // End to end through the binary on one fixture.
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let src = std::fs::read_to_string(fixtures().join("ML03/positive/chain_assign.py")).unwrap();
    let path = dir.path().join("chain_assign.py");
    let p = path.to_str().unwrap();
    std::fs::write(&path, &src).unwrap();
    ensure(mlint(&[p]).status.code() == Some(1), || "unsuppressed file should exit 1".into())?;
    std::fs::write(&path, suppress(&suppress(&src, 4, &["ML03"]), 5, &["ML03"])).unwrap();
    let out = mlint(&[p]);
    ensure(out.status.code() == Some(0), || String::from_utf8_lossy(&out.stdout).into_owned())?;

    Ok(format!("{single} single suppressions exact, {flipped} projects flip to exit 0"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("catalog completeness", catalog_completeness),
        ("canonical examples", canonical_examples),
        ("corpus verification", corpus_verification),
        ("determinism", determinism),
        ("mode gating", mode_gating),
        ("alias robustness", alias_robustness),
        ("robustness fuzz", fuzz),
        ("suppression", suppression),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
