//! Property tests over generated programs.

use proptest::prelude::*;

use mlint::engine::{run, Diagnostic, Mode, RunConfig, RunResult};
use mlint::frontend::{parse, SourceUnit};
use mlint::report::{render_json, render_sarif, render_text, Report};
use mlint::rules;
use mlint::semantic::{ApiSignatureTable, SemanticModel};

/// Statement snippets over the names `PD`, `NP`, `TF`, `TORCH` (import
/// aliases) and `df` (a DataFrame). Each is valid at module level in any
/// order.
const POOL: &[&str] = &[
    "x1 = df[\"a\"][\"b\"]",
    "m = df == NP.nan",
    "df.dropna()",
    "r = PD.read_csv(\"f.csv\")",
    "v = df.values",
    "df[\"z\"] = 0",
    "j = df.merge(df)",
    "a2 = NP.zeros((2, 2))\nd2 = NP.dot(a2, a2)",
    "n = NP.random.rand(3)",
    "NP.random.seed(0)",
    "y = TF.log(x)",
    "y = TF.log(TF.clip_by_value(x, 1e-10, 1.0))",
    "p = PCA(n_components=2)\np.fit(X)",
    "f = f1_score(a, b)",
    "auc = roc_auc_score(a, b)",
    "t = TORCH.randn(3)",
    "TORCH.manual_seed(0)",
    "TORCH.use_deterministic_algorithms(True)",
    "for i, row in df.iterrows():\n    pass",
    "for e in range(3):\n    loss = crit(out)\n    loss.backward()\n    opt.step()",
    "for e in range(3):\n    opt.zero_grad()\n    loss = crit(out)\n    loss.backward()\n    opt.step()",
    "c = df.to_numpy()",
    "k = df.loc[:, (\"a\", \"b\")]",
    "df = df.dropna()",
    "tt = TF.tile(TF.constant([[1.0]]), [2, 1]) + TF.constant([[1.0], [2.0]])",
    "acc = TF.constant([])\nfor i in range(3):\n    acc = TF.concat([acc, [1.0]], 0)",
    "net = TORCH.nn.Linear(2, 2)\no = net.forward(x)",
    "clf = LogisticRegression()",
    "Xs = StandardScaler().fit_transform(X)\nparts = train_test_split(Xs, yv, random_state=0)",
];

const ALIASES: [&str; 4] = ["PD", "NP", "TF", "TORCH"];

fn header(names: [&str; 4]) -> String {
    format!(
        "import pandas as {}\nimport numpy as {}\nimport tensorflow as {}\nimport torch as {}\n\
         from sklearn.decomposition import PCA\nfrom sklearn.linear_model import LogisticRegression\n\
         from sklearn.metrics import f1_score, roc_auc_score\nfrom sklearn.model_selection import train_test_split\n\
         from sklearn.preprocessing import StandardScaler\ndf = {}.DataFrame({{\"a\": [1]}})\n",
        names[0], names[1], names[2], names[3], names[0]
    )
}

fn render(picks: &[usize], names: [&str; 4]) -> String {
    let mut src = header(names);
    for &i in picks {
        let mut s = POOL[i].to_string();
        for (placeholder, name) in ALIASES.iter().zip(names) {
            s = s.replace(&format!("{placeholder}."), &format!("{name}."));
        }
        src.push_str(&s);
        src.push('\n');
    }
    src
}

fn program(picks: &[usize]) -> String {
    render(picks, ["pd", "np", "tf", "torch"])
}

fn picks() -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0..POOL.len(), 0..10)
}

fn files() -> impl Strategy<Value = Vec<Vec<usize>>> {
    proptest::collection::vec(picks(), 1..4)
}

fn units(files: &[Vec<usize>]) -> Vec<SourceUnit> {
    files
        .iter()
        .enumerate()
        .map(|(i, p)| parse(format!("f{i}.py"), program(p)))
        .collect()
}

fn analyze(units: &[SourceUnit], config: &RunConfig) -> RunResult {
    let r = run(&rules::all(), units, &ApiSignatureTable::bundled(), config);
    assert!(r.tool_errors.is_empty(), "{:?}", r.tool_errors);
    assert!(r.parse_failures.is_empty(), "{:?}", r.parse_failures);
    r
}

fn ids(diags: &[Diagnostic]) -> Vec<(String, u32, &'static str)> {
    diags.iter().map(|d| (d.path.clone(), d.line, d.rule.id)).collect()
}

fn rule_id() -> impl Strategy<Value = &'static str> {
    (0usize..22).prop_map(|i| mlint::engine::catalog::CATALOG[i].id)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parsing_is_deterministic(p in picks()) {
        let src = program(&p);
        prop_assert_eq!(parse("a.py", src.clone()).ast, parse("a.py", src).ast);
    }

    #[test]
    fn runs_are_deterministic_and_sorted(fs in files()) {
        let u = units(&fs);
        let a = analyze(&u, &RunConfig::default());
        let b = analyze(&u, &RunConfig::default());
        prop_assert_eq!(&a.diagnostics, &b.diagnostics);
        prop_assert!(a.diagnostics.windows(2).all(|w| w[0] < w[1]));
        let (ra, rb) = (Report::new(a, false), Report::new(b, false));
        prop_assert_eq!(render_json(&ra), render_json(&rb));
        prop_assert_eq!(render_sarif(&ra), render_sarif(&rb));
    }

    #[test]
    fn disabling_a_rule_only_removes_that_rule(fs in files(), id in rule_id()) {
        let u = units(&fs);
        let all = analyze(&u, &RunConfig::default()).diagnostics;
        let mut config = RunConfig::default();
        config.ignore(id);
        let without = analyze(&u, &config).diagnostics;
        let want: Vec<_> = all.into_iter().filter(|d| d.rule.id != id).collect();
        prop_assert_eq!(without, want);
    }

    #[test]
    fn suppression_never_adds_findings(
        p in picks(),
        marks in proptest::collection::vec((any::<prop::sample::Index>(), prop_oneof![rule_id(), Just("all")]), 0..6),
    ) {
        let src = program(&p);
        let mut lines: Vec<String> = src.lines().map(str::to_string).collect();
        for (at, id) in marks {
            let i = at.index(lines.len());
            lines[i].push_str(&format!("  # mlint: disable={id}"));
        }
        let before = analyze(&[parse("a.py", src)], &RunConfig::default()).diagnostics;
        let after = analyze(&[parse("a.py", lines.join("\n") + "\n")], &RunConfig::default());
        prop_assert!(after.notices.is_empty());
        // Appended comments shift byte spans, so compare by position.
        let at = |d: &Diagnostic| (d.line, d.column, d.rule.id, d.message.clone());
        let before: Vec<_> = before.iter().map(at).collect();
        prop_assert!(after.diagnostics.iter().all(|d| before.contains(&at(d))));
    }

    #[test]
    fn production_mode_drops_exactly_ml13_ml14(fs in files()) {
        let u = units(&fs);
        let dev = analyze(&u, &RunConfig::with_mode(Mode::Development)).diagnostics;
        let prod = analyze(&u, &RunConfig::with_mode(Mode::Production)).diagnostics;
        let want: Vec<_> = dev.into_iter().filter(|d| !matches!(d.rule.id, "ML13" | "ML14")).collect();
        prop_assert_eq!(prod, want);
    }

    #[test]
    fn findings_survive_alias_renaming(p in picks(), base in "[a-z][a-z0-9]{0,4}") {
        let renamed = [
            format!("{base}_pd"),
            format!("{base}_np"),
            format!("{base}_tf"),
            format!("{base}_torch"),
        ];
        let names = [renamed[0].as_str(), renamed[1].as_str(), renamed[2].as_str(), renamed[3].as_str()];
        let a = analyze(&[parse("a.py", program(&p))], &RunConfig::default());
        let b = analyze(&[parse("a.py", render(&p, names))], &RunConfig::default());
        prop_assert_eq!(ids(&a.diagnostics), ids(&b.diagnostics));
    }

    #[test]
    fn file_order_does_not_matter(fs in files(), seed in any::<u64>()) {
        let u = units(&fs);
        let base = analyze(&u, &RunConfig::default()).diagnostics;
        let mut perm = u.clone();
        let n = perm.len();
        for i in 0..n {
            perm.swap(i, (seed as usize).wrapping_add(i * 7) % n);
        }
        prop_assert_eq!(analyze(&perm, &RunConfig::default()).diagnostics, base);
    }

    #[test]
    fn ml22_is_file_local(a in picks(), b in picks()) {
        let first = parse("a.py", program(&a));
        let alone = analyze(std::slice::from_ref(&first), &RunConfig::default());
        let paired = analyze(&[first, parse("b.py", program(&b))], &RunConfig::default());
        let of_a = |r: &RunResult| -> Vec<_> {
            ids(&r.diagnostics).into_iter().filter(|k| k.0 == "a.py" && k.2 == "ML22").collect()
        };
        prop_assert_eq!(of_a(&alone), of_a(&paired));
    }

    #[test]
    fn diagnostic_spans_match_locations(p in picks()) {
        let u = parse("a.py", program(&p));
        let r = analyze(std::slice::from_ref(&u), &RunConfig::default());
        for d in &r.diagnostics {
            prop_assert!(!u.slice(d.span).is_empty());
            prop_assert_eq!(u.span_to_location(d.span), (d.line, d.column));
        }
    }

    #[test]
    fn renderers_agree(fs in files()) {
        let report = Report::new(analyze(&units(&fs), &RunConfig::default()), false);
        let text = render_text(&report)
            .lines()
            .filter(|l| l.split(": ").nth(1).is_some_and(|s| s.starts_with("ML")))
            .count();
        let json: serde_json::Value = serde_json::from_str(&render_json(&report)).unwrap();
        let sarif: serde_json::Value = serde_json::from_str(&render_sarif(&report)).unwrap();
        prop_assert_eq!(text, report.diagnostics.len());
        prop_assert_eq!(json["diagnostics"].as_array().unwrap().len(), text);
        prop_assert_eq!(sarif["runs"][0]["results"].as_array().unwrap().len(), text);
    }
}

/// Snippets that use none of pandas, numpy or tensorflow.
const NO_DATA_LIBS: &[&str] = &[
    "import torch\ntorch.use_deterministic_algorithms(True)",
    "from sklearn.svm import SVC\nclf = SVC(C=1.0)\nclf.fit(X, y)",
    "rows = [[1, 2], [3, 4]]\ncell = rows[0][1]",
    "items = {}\nitems[\"a\"] = 0",
    "for i in range(3):\n    total = total + t[i]",
    "vals = d.values\nd.dropna()\nm = a.merge(b)",
    "s = x == None",
];

/// Snippets that use only pandas.
const PANDAS_ONLY: &[&str] = &[
    "df = pd.DataFrame({\"a\": [1]})",
    "x1 = df[\"a\"][\"b\"]",
    "df.dropna()",
    "for i, row in df.iterrows():\n    total = row[0]",
    "r = pd.read_csv(\"f.csv\")",
    "v = df.values\nm = df.merge(df)",
    "out = df.apply(f)\nout.append(df)",
    "model = df.eval(\"a + 1\")\nmodel.forward()",
];

fn join(pool: &'static [&'static str]) -> impl Strategy<Value = String> {
    proptest::collection::vec(0..pool.len(), 0..8)
        .prop_map(move |p| p.iter().map(|&i| format!("{}\n", pool[i])).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn data_cleaning_rules_need_a_data_library(body in join(NO_DATA_LIBS)) {
        let r = analyze(&[parse("a.py", body)], &RunConfig::default());
        let hits: Vec<_> = ids(&r.diagnostics)
            .into_iter()
            .filter(|k| k.2 <= "ML09")
            .collect();
        prop_assert!(hits.is_empty(), "{:?}", hits);
    }

    #[test]
    fn training_rules_ignore_pure_pandas(body in join(PANDAS_ONLY)) {
        let src = format!("import pandas as pd\n{body}");
        let r = analyze(&[parse("a.py", src)], &RunConfig::default());
        let hits: Vec<_> = ids(&r.diagnostics)
            .into_iter()
            .filter(|k| ("ML10"..="ML20").contains(&k.2))
            .collect();
        prop_assert!(hits.is_empty(), "{:?}", hits);
    }

    #[test]
    fn no_imports_means_unknown_provenance(body in join(NO_DATA_LIBS)) {
        let body = body.replace("import torch\n", "").replace("from sklearn.svm import SVC\n", "");
        let u = parse("a.py", body);
        let module = u.ast.as_ref().unwrap();
        let model = SemanticModel::build(module, &ApiSignatureTable::bundled());
        module.walk_exprs(&mut |e| assert!(model.provenance(e.id).is_unknown(), "{:?}", e));
    }

    #[test]
    fn ml21_ignores_pipeline_fits(
        scaler in prop::sample::select(vec!["StandardScaler", "MinMaxScaler", "RobustScaler"]),
        model in prop::sample::select(vec!["SVC(C=1.0)", "LogisticRegression(C=1.0)", "PCA(n_components=2)"]),
        composite in prop::sample::select(vec!["make_pipeline({s}(), {m})", "Pipeline([(\"s\", {s}()), (\"m\", {m})])"]),
        use_cv in any::<bool>(),
    ) {
        let pipe = composite.replace("{s}", scaler).replace("{m}", model);
        let tail = if use_cv {
            "scores = cross_val_score(pipe, X, y, cv=5)"
        } else {
            "Xt = pipe.fit_transform(X)\nparts = train_test_split(Xt, y, random_state=0)"
        };
        let src = format!(
            "from sklearn.decomposition import PCA\nfrom sklearn.linear_model import LogisticRegression\n\
             from sklearn.model_selection import cross_val_score, train_test_split\n\
             from sklearn.pipeline import Pipeline, make_pipeline\n\
             from sklearn.preprocessing import MinMaxScaler, RobustScaler, StandardScaler\n\
             from sklearn.svm import SVC\npipe = {pipe}\n{tail}\n"
        );
        let r = analyze(&[parse("a.py", src)], &RunConfig::default());
        prop_assert!(r.diagnostics.iter().all(|d| d.rule.id != "ML21"), "{:?}", ids(&r.diagnostics));
    }

    #[test]
    fn zero_grad_order_decides_ml20(
        extra in proptest::collection::vec(prop::sample::select(vec!["n = n + 1", "log(x)", "out = model(x)"]), 0..3),
        before in any::<bool>(),
    ) {
        let mut body: Vec<String> = extra.iter().map(|s| s.to_string()).collect();
        body.push("loss = crit(model(x), y)".into());
        body.push("loss.backward()".into());
        body.push("optimizer.step()".into());
        let at = if before { 0 } else { body.len() };
        body.insert(at, "optimizer.zero_grad()".into());
        let src = format!(
            "import torch\ntorch.use_deterministic_algorithms(True)\nfor x, y in loader:\n{}\n",
            body.iter().map(|s| format!("    {s}")).collect::<Vec<_>>().join("\n")
        );
        let r = analyze(&[parse("a.py", src)], &RunConfig::default());
        let flagged = r.diagnostics.iter().any(|d| d.rule.id == "ML20");
        prop_assert_eq!(flagged, !before);
    }
}
