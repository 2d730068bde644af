use std::path::Path;

use mlint::engine::RunConfig;
use mlint::harness::{self, coverage, verify};

fn fixtures() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures"))
}

#[test]
fn corpus_verifies_with_default_config() {
    let r = verify(fixtures(), &RunConfig::default());
    assert!(r.passed(), "{r}");
    assert!(r.files >= 88, "{r}");
}

#[test]
fn every_rule_has_two_positive_sites_and_two_negatives() {
    for (id, c) in coverage(fixtures()).unwrap() {
        assert!(c.positive_sites >= 2, "{id}: {c:?}");
        assert!(c.negative_files >= 2, "{id}: {c:?}");
    }
}

#[test]
fn negative_fixtures_carry_no_expectations() {
    let all = harness::collect_expectations(fixtures()).unwrap();
    let stray: Vec<_> = all.iter().filter(|e| e.path.contains("/negative/")).collect();
    assert!(stray.is_empty(), "{stray:?}");
}

#[test]
fn expression_spans_cover_their_source() {
    use mlint::frontend::ast::{ExprKind, StmtKind};
    use mlint::frontend::{load, parse};
    use std::mem::discriminant;

    let mut checked = 0;
    for p in harness::projects(fixtures()) {
        for f in &p.files {
            let u = load(f, f.display().to_string()).unwrap();
            let module = u.ast.as_ref().unwrap();
            module.walk_exprs(&mut |e| {
                let s = &u.text;
                let (a, b) = (e.span.start as usize, e.span.end as usize);
                assert!(a <= b && s.is_char_boundary(a) && s.is_char_boundary(b), "{}: {}", u.path, e.span);
                let slice = u.slice(e.span);
                match &e.kind {
                    ExprKind::Name(id) => assert_eq!(slice, id, "{}", u.path),
                    ExprKind::Attribute { .. }
                    | ExprKind::Call { .. }
                    | ExprKind::Subscript { .. }
                    | ExprKind::BinOp { .. }
                    | ExprKind::Compare { .. } => {
                        let again = parse("x.py", format!("__x = ({slice})\n"));
                        let m = again.ast.unwrap_or_else(|| panic!("{}: {slice:?} does not re-parse", u.path));
                        let StmtKind::Assign { value, .. } = &m.body[0].kind else {
                            panic!("not an assignment")
                        };
                        assert_eq!(discriminant(&value.kind), discriminant(&e.kind), "{}: {slice:?}", u.path);
                    }
                    _ => {}
                }
                checked += 1;
            });
        }
    }
    assert!(checked > 1000, "{checked}");
}
