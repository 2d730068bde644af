//! Systematic import-alias renaming, used to check that findings do not
//! depend on the local names chosen for imports.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Range;

use rustpython_parser::lexer::lex;
use rustpython_parser::{Mode, Tok};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rewrite {
    pub text: String,
    /// Old local name to new local name.
    pub renames: BTreeMap<String, String>,
}

fn starts_statement(prev: Option<&Tok>) -> bool {
    matches!(
        prev,
        None | Some(Tok::Newline | Tok::Indent | Tok::Dedent | Tok::Semi | Tok::Colon)
    )
}

fn name(t: &Tok) -> Option<&str> {
    match t {
        Tok::Name { name } => Some(name),
        _ => None,
    }
}

struct Rewriter<'a> {
    toks: &'a [(Tok, Range<usize>)],
    taken: BTreeSet<String>,
    renames: BTreeMap<String, String>,
    edits: Vec<(Range<usize>, String)>,
    in_import: BTreeSet<usize>,
}

impl Rewriter<'_> {
    fn fresh(&mut self, old: &str) -> String {
        if let Some(n) = self.renames.get(old) {
            return n.clone();
        }
        let mut k = 0;
        let new = loop {
            let cand = format!("{old}_r{k}");
            if !self.taken.contains(&cand) {
                break cand;
            }
            k += 1;
        };
        self.taken.insert(new.clone());
        self.renames.insert(old.to_string(), new.clone());
        new
    }

    fn tok(&self, i: usize) -> Option<&Tok> {
        self.toks.get(i).map(|t| &t.0)
    }

    /// Renames the alias after `as` at `i`, or adds one after the bound
    /// name at `bound` when `i` is not `as`. Returns the next index.
    fn bind(&mut self, i: usize, bound: usize, simple: bool) -> usize {
        if matches!(self.tok(i), Some(Tok::As)) {
            if let Some(alias) = self.tok(i + 1).and_then(name).map(str::to_string) {
                let new = self.fresh(&alias);
                self.in_import.insert(i + 1);
                self.edits.push((self.toks[i + 1].1.clone(), new));
            }
            return i + 2;
        }
        if simple {
            if let Some(old) = self.tok(bound).and_then(name).map(str::to_string) {
                let new = self.fresh(&old);
                let end = self.toks[bound].1.end;
                self.edits.push((end..end, format!(" as {new}")));
            }
        }
        i
    }

    /// `import a.b as c, d` starting at the `import` token.
    fn import(&mut self, mut i: usize) -> usize {
        i += 1;
        loop {
            let first = i;
            while let Some(Tok::Name { .. }) = self.tok(i) {
                self.in_import.insert(i);
                i += 1;
                if matches!(self.tok(i), Some(Tok::Dot)) {
                    i += 1;
                } else {
                    break;
                }
            }
            if i == first {
                return i;
            }
            i = self.bind(i, first, i == first + 1);
            if matches!(self.tok(i), Some(Tok::Comma)) {
                i += 1;
            } else {
                return i;
            }
        }
    }

    /// `from m import x as y, z` starting at the `from` token.
    fn from_import(&mut self, mut i: usize) -> usize {
        i += 1;
        let mut future = false;
        while let Some(t) = self.tok(i) {
            if matches!(t, Tok::Import) {
                break;
            }
            if name(t) == Some("__future__") {
                future = true;
            }
            self.in_import.insert(i);
            i += 1;
        }
        i += 1;
        if matches!(self.tok(i), Some(Tok::Lpar)) {
            i += 1;
        }
        while let Some(Tok::Name { .. }) = self.tok(i) {
            self.in_import.insert(i);
            let bound = i;
            i = self.bind(i + 1, bound, !future);
            if matches!(self.tok(i), Some(Tok::Comma)) {
                i += 1;
            } else {
                break;
            }
        }
        i
    }
}

/// Renames every name bound by an import statement, adding `as` clauses
/// where needed, and every later use of those names. Line structure is
/// preserved. Returns `None` when the text does not lex.
pub fn rewrite_aliases(source: &str) -> Option<Rewrite> {
    let mut toks = Vec::new();
    for item in lex(source, Mode::Module) {
        let (tok, range) = item.ok()?;
        if matches!(tok, Tok::Comment(_) | Tok::NonLogicalNewline) {
            continue;
        }
        toks.push((tok, usize::from(range.start())..usize::from(range.end())));
    }
    let taken = toks
        .iter()
        .filter_map(|(t, _)| name(t).map(str::to_string))
        .collect();
    let mut rw = Rewriter {
        toks: &toks,
        taken,
        renames: BTreeMap::new(),
        edits: Vec::new(),
        in_import: BTreeSet::new(),
    };

    let mut i = 0;
    while i < toks.len() {
        let prev = i.checked_sub(1).map(|p| &toks[p].0);
        i = match &toks[i].0 {
            Tok::Import if starts_statement(prev) => rw.import(i),
            Tok::From if starts_statement(prev) => rw.from_import(i),
            _ => i + 1,
        };
    }

    let mut depth = 0i32;
    for (i, (tok, range)) in toks.iter().enumerate() {
        match tok {
            Tok::Lpar | Tok::Lsqb | Tok::Lbrace => depth += 1,
            Tok::Rpar | Tok::Rsqb | Tok::Rbrace => depth -= 1,
            _ => {}
        }
        let Some(n) = name(tok) else { continue };
        if rw.in_import.contains(&i) {
            continue;
        }
        let Some(new) = rw.renames.get(n) else { continue };
        let after_dot = i > 0 && matches!(toks[i - 1].0, Tok::Dot);
        let keyword_arg = depth > 0 && matches!(toks.get(i + 1), Some((Tok::Equal, _)));
        if !after_dot && !keyword_arg {
            rw.edits.push((range.clone(), new.clone()));
        }
    }

    let mut edits = rw.edits;
    edits.sort_by(|a, b| b.0.start.cmp(&a.0.start).then(b.0.end.cmp(&a.0.end)));
    let mut text = source.to_string();
    for (range, new) in edits {
        text.replace_range(range, &new);
    }
    Some(Rewrite {
        text,
        renames: rw.renames,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rw(src: &str) -> String {
        rewrite_aliases(src).unwrap().text
    }

    #[test]
    fn module_alias() {
        assert_eq!(
            rw("import numpy as np\nx = np.dot(a, b)  # np\ns = 'np'\n"),
            "import numpy as np_r0\nx = np_r0.dot(a, b)  # np\ns = 'np'\n"
        );
    }

    #[test]
    fn plain_import_gains_alias() {
        assert_eq!(
            rw("import torch\ntorch.manual_seed(0)\n"),
            "import torch as torch_r0\ntorch_r0.manual_seed(0)\n"
        );
        // Dotted imports without `as` are left alone.
        assert_eq!(rw("import os.path\nos.path.join()\n"), "import os.path\nos.path.join()\n");
    }

    #[test]
    fn from_imports() {
        assert_eq!(
            rw("from sklearn.decomposition import (PCA,\n    KernelPCA as K)\np = PCA(); k = K()\n"),
            "from sklearn.decomposition import (PCA as PCA_r0,\n    KernelPCA as K_r0)\np = PCA_r0(); k = K_r0()\n"
        );
        assert_eq!(rw("from numpy import *\n"), "from numpy import *\n");
        assert_eq!(
            rw("from __future__ import annotations\n"),
            "from __future__ import annotations\n"
        );
    }

    #[test]
    fn attributes_and_keywords_untouched() {
        assert_eq!(
            rw("import pandas as pd\ndf.pd = f(pd=pd)\n"),
            "import pandas as pd_r0\ndf.pd = f(pd=pd_r0)\n"
        );
    }

    #[test]
    fn fresh_names_avoid_collisions() {
        let out = rewrite_aliases("import numpy as np\nnp_r0 = np.ones(1)\n").unwrap();
        assert_eq!(out.renames["np"], "np_r1");
        assert_eq!(out.text, "import numpy as np_r1\nnp_r0 = np_r1.ones(1)\n");
    }

    #[test]
    fn line_count_preserved() {
        let src = "import numpy as np\nif True: import pandas\nfrom torch import nn\nm = nn.Linear(1, 1); pandas.read_csv(np)\n";
        let out = rw(src);
        assert_eq!(out.lines().count(), src.lines().count());
        assert!(out.contains("if True: import pandas as pandas_r0"));
        assert!(out.contains("nn_r0.Linear"));
    }

    #[test]
    fn lex_error_is_none() {
        assert!(rewrite_aliases("s = 'unterminated\n").is_none());
    }
}
