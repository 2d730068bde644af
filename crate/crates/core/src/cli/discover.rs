//! Input file discovery.

use std::path::{Path, PathBuf};

use walkdir::WalkDir;

fn is_hidden(name: &str) -> bool {
    name.starts_with('.') && name != "." && name != ".."
}

/// Collects `*.py` files under `paths`, sorted and deduplicated. Files named
/// explicitly are kept whatever their extension. Hidden directories and
/// entries whose file name is in `exclude` are skipped during traversal.
pub fn discover(paths: &[PathBuf], exclude: &[String]) -> Result<Vec<PathBuf>, String> {
    let mut out = Vec::new();
    for root in paths {
        if !root.exists() {
            return Err(format!("{}: no such file or directory", root.display()));
        }
        if root.is_file() {
            out.push(root.clone());
            continue;
        }
        let walker = WalkDir::new(root)
            .follow_links(false)
            .sort_by_file_name()
            .into_iter()
            .filter_entry(|e| {
                if e.depth() == 0 {
                    return true;
                }
                let name = e.file_name().to_string_lossy();
                let hidden = e.file_type().is_dir() && is_hidden(&name);
                !hidden && !exclude.iter().any(|x| *x == name)
            });
        for entry in walker {
            let entry = entry.map_err(|e| e.to_string())?;
            if entry.file_type().is_file() && entry.path().extension().is_some_and(|x| x == "py") {
                out.push(entry.into_path());
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Path as shown in reports: forward slashes, no leading `./`.
pub fn display_path(path: &Path) -> String {
    let s = path.to_string_lossy().replace('\\', "/");
    match s.strip_prefix("./") {
        Some(rest) if !rest.is_empty() => rest.to_string(),
        _ => s,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn touch(p: &Path) {
        fs::create_dir_all(p.parent().unwrap()).unwrap();
        fs::write(p, "").unwrap();
    }

    fn names(root: &Path, files: &[PathBuf]) -> Vec<String> {
        files
            .iter()
            .map(|f| display_path(f.strip_prefix(root).unwrap()))
            .collect()
    }

    #[test]
    fn python_files_only() {
        let d = tempfile::tempdir().unwrap();
        touch(&d.path().join("a.py"));
        touch(&d.path().join("b.txt"));
        let got = discover(&[d.path().to_path_buf()], &[]).unwrap();
        assert_eq!(names(d.path(), &got), ["a.py"]);
    }

    #[test]
    fn nested_sorted_hidden_and_excluded_skipped() {
        let d = tempfile::tempdir().unwrap();
        for f in ["z.py", "b/y.py", "b/a.py", "a/c/x.py", ".git/h.py", "build/o.py", "b/.hidden.py"] {
            touch(&d.path().join(f));
        }
        let got = discover(&[d.path().to_path_buf()], &["build".into()]).unwrap();
        assert_eq!(
            names(d.path(), &got),
            ["a/c/x.py", "b/.hidden.py", "b/a.py", "b/y.py", "z.py"]
        );
    }

    #[test]
    fn explicit_file_and_duplicates() {
        let d = tempfile::tempdir().unwrap();
        let f = d.path().join("script");
        touch(&f);
        touch(&d.path().join("m.py"));
        let got = discover(&[f.clone(), d.path().to_path_buf(), f.clone()], &[]).unwrap();
        assert_eq!(names(d.path(), &got), ["m.py", "script"]);
    }

    #[test]
    fn missing_path_is_an_error() {
        let d = tempfile::tempdir().unwrap();
        assert!(discover(&[d.path().join("nope")], &[]).is_err());
    }

    #[test]
    fn display_strips_dot_slash() {
        assert_eq!(display_path(Path::new("./a/b.py")), "a/b.py");
        assert_eq!(display_path(Path::new("a/b.py")), "a/b.py");
    }
}
