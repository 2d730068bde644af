//! Random input generation and a crash-checking driver.

use std::panic::{catch_unwind, AssertUnwindSafe};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{self, RunConfig};
use crate::frontend::parse_bytes;
use crate::rules;
use crate::semantic::ApiSignatureTable;

const VOCAB: &[&str] = &[
    "import", "from", "as", "def", "class", "for", "in", "while", "if", "else", "elif", "return",
    "with", "lambda", "yield", "try", "except", "finally", "not", "and", "or", "is", "None",
    "True", "False", "pass", "global", "nonlocal", "async", "await", "del", "assert", "raise",
    "np", "pd", "tf", "torch", "nn", "F", "df", "model", "optimizer", "loss", "x", "y", "self",
    "numpy", "pandas", "tensorflow", "sklearn", "random", "nan", "dot", "log", "clip", "fit",
    "fit_transform", "transform", "eval", "train", "forward", "backward", "step", "zero_grad",
    "iterrows", "values", "merge", "read_csv", "dropna", "tile", "concat", "constant", "append",
    "train_test_split", "Pipeline", "PCA", "SVC", "SGD", "Adam", "DataLoader", "f1_score",
    "(", ")", "[", "]", "{", "}", ":", ",", ".", "=", "==", "!=", "+", "-", "*", "**", "/", "@",
    "+=", "->", "...", ";", "\\", "0", "1", "0.5", "-1e-10", "'a'", "\"b\"", "f'{x}'", "\"\"\"",
    "#", "# mlint: disable=", "# expect: ML01", "\n", "\n", "\n", "    ", "\t", " ",
];

/// Deterministic stream of fuzz inputs.
pub struct FuzzGen {
    rng: ChaCha8Rng,
    seeds: Vec<Vec<u8>>,
}

impl FuzzGen {
    /// `seeds` are well-formed sources to mutate; may be empty.
    pub fn new(seed: u64, seeds: Vec<String>) -> Self {
        FuzzGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            seeds: seeds.into_iter().map(String::into_bytes).collect(),
        }
    }

    fn bytes(&mut self) -> Vec<u8> {
        let n = self.rng.gen_range(0..512);
        (0..n).map(|_| self.rng.gen()).collect()
    }

    fn ascii(&mut self) -> Vec<u8> {
        let n = self.rng.gen_range(0..512);
        (0..n)
            .map(|_| match self.rng.gen_range(0..10) {
                0 => b'\n',
                1 => b' ',
                _ => self.rng.gen_range(0x20..0x7f),
            })
            .collect()
    }

    fn tokens(&mut self) -> Vec<u8> {
        let n = self.rng.gen_range(1..200);
        let mut out = String::new();
        for _ in 0..n {
            out.push_str(VOCAB.choose(&mut self.rng).unwrap());
            if self.rng.gen_bool(0.6) {
                out.push(' ');
            }
        }
        out.into_bytes()
    }

    fn nested(&mut self) -> Vec<u8> {
        let depth = self.rng.gen_range(1..600);
        let (open, close) = *[("(", ")"), ("[", "]"), ("{", "}"), ("-", ""), ("not ", "")]
            .choose(&mut self.rng)
            .unwrap();
        let mut s = String::from("x = ");
        for _ in 0..depth {
            s.push_str(open);
        }
        s.push('1');
        for _ in 0..depth {
            s.push_str(close);
        }
        if self.rng.gen_bool(0.3) {
            s.truncate(self.rng.gen_range(0..=s.len()));
        }
        s.push('\n');
        s.into_bytes()
    }

    fn mutate(&mut self) -> Vec<u8> {
        let mut data = self.seeds.choose(&mut self.rng).cloned().unwrap_or_default();
        for _ in 0..self.rng.gen_range(1..8) {
            let len = data.len();
            match self.rng.gen_range(0..6) {
                0 if len > 0 => {
                    let i = self.rng.gen_range(0..len);
                    data[i] = self.rng.gen();
                }
                1 if len > 0 => {
                    let a = self.rng.gen_range(0..len);
                    let b = (a + self.rng.gen_range(0..32)).min(len);
                    data.drain(a..b);
                }
                2 => {
                    let i = self.rng.gen_range(0..=len);
                    let tok = VOCAB.choose(&mut self.rng).unwrap().as_bytes();
                    data.splice(i..i, tok.iter().copied());
                }
                3 => data.truncate(self.rng.gen_range(0..=len)),
                4 if len > 0 => {
                    let a = self.rng.gen_range(0..len);
                    let b = (a + self.rng.gen_range(0..64)).min(len);
                    let chunk = data[a..b].to_vec();
                    let i = self.rng.gen_range(0..=data.len());
                    data.splice(i..i, chunk);
                }
                _ => {
                    let i = self.rng.gen_range(0..=len);
                    data.splice(i..i, *b"\n    ");
                }
            }
        }
        data
    }

    pub fn next_input(&mut self) -> Vec<u8> {
        let kinds = if self.seeds.is_empty() { 4 } else { 6 };
        match self.rng.gen_range(0..kinds) {
            0 => self.bytes(),
            1 => self.ascii(),
            2 => self.tokens(),
            3 => self.nested(),
            _ => self.mutate(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct FuzzOutcome {
    pub inputs: usize,
    pub parsed: usize,
    /// Index of the first input in the failing batch, with the message.
    pub crashes: Vec<(usize, String)>,
}

/// Runs parse plus every rule over `inputs` in batches. Contained rule
/// panics count as crashes too.
pub fn run_fuzz(inputs: Vec<Vec<u8>>, batch: usize) -> FuzzOutcome {
    let sigs = ApiSignatureTable::bundled();
    let config = RunConfig::default();
    let rules = rules::all();
    let mut out = FuzzOutcome::default();
    for (b, chunk) in inputs.chunks(batch.max(1)).enumerate() {
        let first = b * batch.max(1);
        let res = catch_unwind(AssertUnwindSafe(|| {
            let units: Vec<_> = chunk
                .iter()
                .enumerate()
                .map(|(i, bytes)| parse_bytes(format!("fuzz{}.py", first + i), bytes.clone()))
                .collect();
            let parsed = units.iter().filter(|u| u.is_parsed()).count();
            (parsed, engine::run(&rules, &units, &sigs, &config))
        }));
        out.inputs += chunk.len();
        match res {
            Ok((parsed, r)) => {
                out.parsed += parsed;
                for e in r.tool_errors {
                    out.crashes.push((first, format!("{} {}: {}", e.path, e.rule, e.message)));
                }
            }
            Err(_) => out.crashes.push((first, "panic outside rule isolation".into())),
        }
    }
    out
}
