//! Seeded dataset generation for majority-tree root prediction.
//!
//! Each split is a JSON-lines file, one [`Example`] per line:
//!
//! ```text
//! {"id":0,"leaves":[0,1,...],"label":1,"tokens":["0","1",...],"aux":[{"pos":3,"level":1,"value":1}],"perm":null}
//! ```
//!
//! * `tokens` holds one `"0"`/`"1"` per leaf (flat) or leaves interleaved with
//!   level-tagged separators `"]_ℓ"` (scaffold). No `[CLS]` is stored.
//! * `aux[i].pos` is a 0-based index into `tokens`; `level` is the height of
//!   the subtree that closes there (1 = just above the leaves, `d` = root).
//!   Flat examples carry an empty `aux`.
//! * For permuted examples `leaves` holds the shuffled bits the model sees,
//!   `perm[i]` is the original slot now at position `i`, and `label`/`aux`
//!   still describe the original, unshuffled tree.
//!
//! Example `i` of split `s` draws from a ChaCha8 stream seeded with
//! [`example_seed`]`(seed, s, i)`, so files do not depend on generation order.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::trees::{build_balanced_tree, Assignment, EvalTrace, NodeKind, PrereqTree, RuleSpec};
use crate::{Error, Result};

/// Largest leaf count a dataset may use (`3^8`).
pub const MAX_DATASET_LEAVES: usize = 6561;

/// Prefix of separator tokens; `"]_2"` closes a height-2 subtree.
pub const SEPARATOR_PREFIX: &str = "]_";

const PERM_STREAM: u64 = 0x7065_726d_7574_6521;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    Flat,
    Scaffold,
}

impl std::str::FromStr for Encoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flat" => Ok(Encoding::Flat),
            "scaffold" => Ok(Encoding::Scaffold),
            other => Err(Error::Config(format!("unknown encoding {other:?}"))),
        }
    }
}

impl std::fmt::Display for Encoding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Encoding::Flat => "flat",
            Encoding::Scaffold => "scaffold",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSizes {
    pub train: usize,
    pub val: usize,
    pub test: usize,
}

impl Default for SplitSizes {
    fn default() -> Self {
        SplitSizes {
            train: 20_000,
            val: 5_000,
            test: 5_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Val, Split::Test];

    fn tag(self) -> u64 {
        match self {
            Split::Train => 1,
            Split::Val => 2,
            Split::Test => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetConfig {
    pub k: usize,
    pub depth: usize,
    pub p: f64,
    pub sizes: SplitSizes,
    pub seed: u64,
    pub encoding: Encoding,
    /// Also write a leaf-permuted copy of the test split.
    pub permuted: bool,
}

impl DatasetConfig {
    pub fn new(depth: usize) -> Self {
        DatasetConfig {
            k: 3,
            depth,
            p: 0.5,
            sizes: SplitSizes::default(),
            seed: 0,
            encoding: Encoding::Flat,
            permuted: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::Config(format!("p={} is not a probability", self.p)));
        }
        let n = crate::trees::leaf_count(self.k, self.depth)?;
        if n > MAX_DATASET_LEAVES {
            return Err(Error::SizeLimit(format!(
                "{n} leaves exceeds the dataset limit of {MAX_DATASET_LEAVES}"
            )));
        }
        self.tree().map(|_| ())
    }

    pub fn tree(&self) -> Result<PrereqTree> {
        build_balanced_tree(self.k, self.depth, RuleSpec::Majority)
    }

    /// SHA-256 of the config's canonical JSON, hex encoded.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        hex_digest(json.as_bytes())
    }
}

fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxLabel {
    pub pos: usize,
    pub level: usize,
    #[serde(with = "bit")]
    pub value: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Example {
    pub id: u64,
    #[serde(with = "bits")]
    pub leaves: Vec<bool>,
    #[serde(with = "bit")]
    pub label: bool,
    pub tokens: Vec<String>,
    pub aux: Vec<AuxLabel>,
    pub perm: Option<Vec<usize>>,
}

impl Example {
    pub fn is_scaffold(&self) -> bool {
        self.tokens.iter().any(|t| is_separator(t))
    }

    /// Leaves in original slot order, undoing any recorded permutation.
    pub fn original_leaves(&self) -> Result<Vec<bool>> {
        match &self.perm {
            None => Ok(self.leaves.clone()),
            Some(perm) => {
                check_permutation(perm, self.leaves.len())?;
                let mut orig = vec![false; self.leaves.len()];
                for (i, &src) in perm.iter().enumerate() {
                    orig[src] = self.leaves[i];
                }
                Ok(orig)
            }
        }
    }
}

fn is_separator(tok: &str) -> bool {
    tok.starts_with(SEPARATOR_PREFIX)
}

fn leaf_token(b: bool) -> String {
    if b { "1" } else { "0" }.to_string()
}

/// One token per leaf bit, in slot order.
pub fn encode_flat(x: &Assignment) -> Vec<String> {
    x.bits().iter().map(|&b| leaf_token(b)).collect()
}

/// Leaf bits in left-to-right order, with `"]_h"` after every completed
/// height-`h` subtree. Each separator is paired with the subtree's value.
pub fn encode_scaffold(
    tree: &PrereqTree,
    x: &Assignment,
    trace: &EvalTrace,
) -> Result<(Vec<String>, Vec<AuxLabel>)> {
    if x.len() != tree.input_count() {
        return Err(Error::Length {
            expected: tree.input_count(),
            got: x.len(),
        });
    }
    if trace.values().len() != tree.node_count() {
        return Err(Error::Length {
            expected: tree.node_count(),
            got: trace.values().len(),
        });
    }
    let heights = tree.heights();
    let mut tokens = Vec::with_capacity(tree.node_count());
    let mut aux = Vec::with_capacity(tree.internal_count());
    let mut stack = vec![(tree.root(), false)];
    while let Some((id, expanded)) = stack.pop() {
        let node = tree.node(id)?;
        match node.kind {
            NodeKind::Input { slot } => tokens.push(leaf_token(x.bits()[slot])),
            NodeKind::Const(_) => {
                return Err(Error::Unsupported("scaffold encoding of constant leaves".into()))
            }
            NodeKind::Internal(_) if expanded => {
                aux.push(AuxLabel {
                    pos: tokens.len(),
                    level: heights[id],
                    value: trace.value(id)?,
                });
                tokens.push(format!("{SEPARATOR_PREFIX}{}", heights[id]));
            }
            NodeKind::Internal(_) => {
                stack.push((id, true));
                stack.extend(node.children.iter().rev().map(|&c| (c, false)));
            }
        }
    }
    Ok((tokens, aux))
}

fn parse_leaf(tok: &str) -> Result<bool> {
    match tok {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(Error::Format(format!("unexpected token {other:?}"))),
    }
}

pub fn decode_flat(tokens: &[String]) -> Result<Assignment> {
    tokens.iter().map(|t| parse_leaf(t)).collect::<Result<Vec<_>>>().map(Assignment::new)
}

/// Drops separators and reads the leaf bits back.
pub fn decode_scaffold(tokens: &[String]) -> Result<Assignment> {
    tokens
        .iter()
        .filter(|t| !is_separator(t))
        .map(|t| parse_leaf(t))
        .collect::<Result<Vec<_>>>()
        .map(Assignment::new)
}

/// Builds an example from leaf bits.
pub fn make_example(
    tree: &PrereqTree,
    id: u64,
    x: Assignment,
    encoding: Encoding,
) -> Result<Example> {
    let trace = tree.evaluate(&x)?;
    let (tokens, aux) = match encoding {
        Encoding::Flat => (encode_flat(&x), Vec::new()),
        Encoding::Scaffold => encode_scaffold(tree, &x, &trace)?,
    };
    Ok(Example {
        id,
        label: trace.root_value(),
        leaves: x.into_bits(),
        tokens,
        aux,
        perm: None,
    })
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::Length {
            expected: n,
            got: perm.len(),
        });
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::Format(format!("{perm:?} is not a permutation of 0..{n}")));
        }
    }
    Ok(())
}

/// Applies `perm` (position `i` receives current leaf `perm[i]`). Separators
/// stay where they are; label and aux are untouched. A permutation already
/// recorded on `e` is composed with the new one.
pub fn permute_leaves_with(e: &Example, perm: &[usize]) -> Result<Example> {
    let n = e.leaves.len();
    check_permutation(perm, n)?;
    let leaves: Vec<bool> = perm.iter().map(|&src| e.leaves[src]).collect();
    let mut next = leaves.iter();
    let tokens = e
        .tokens
        .iter()
        .map(|t| {
            if is_separator(t) {
                Ok(t.clone())
            } else {
                next.next()
                    .map(|&b| leaf_token(b))
                    .ok_or_else(|| Error::Format("more leaf tokens than leaves".into()))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    if next.next().is_some() {
        return Err(Error::Format("fewer leaf tokens than leaves".into()));
    }
    let composed = match &e.perm {
        Some(old) => perm.iter().map(|&i| old[i]).collect(),
        None => perm.to_vec(),
    };
    Ok(Example {
        id: e.id,
        leaves,
        label: e.label,
        tokens,
        aux: e.aux.clone(),
        perm: Some(composed),
    })
}

/// Uniform random permutation drawn from a ChaCha8 stream seeded with `seed`.
pub fn permute_leaves(e: &Example, seed: u64) -> Result<Example> {
    let mut perm: Vec<usize> = (0..e.leaves.len()).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    permute_leaves_with(e, &perm)
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `mix64(mix64(mix64(seed) ^ tag(split)) ^ index)` with tags train=1,
/// val=2, test=3.
pub fn example_seed(seed: u64, split: Split, index: u64) -> u64 {
    mix64(mix64(mix64(seed) ^ split.tag()) ^ index)
}

/// Seed of the permutation applied to an example in the permuted test copy.
pub fn permutation_seed(seed: u64, split: Split, index: u64) -> u64 {
    mix64(example_seed(seed, split, index) ^ PERM_STREAM)
}

/// Generates the examples of one split in memory.
pub fn generate_examples(cfg: &DatasetConfig, split: Split) -> Result<Vec<Example>> {
    cfg.validate()?;
    let tree = cfg.tree()?;
    let count = match split {
        Split::Train => cfg.sizes.train,
        Split::Val => cfg.sizes.val,
        Split::Test => cfg.sizes.test,
    };
    let n = tree.input_count();
    (0..count as u64)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(example_seed(cfg.seed, split, i));
            let bits: Vec<bool> = (0..n).map(|_| rng.random_bool(cfg.p)).collect();
            make_example(&tree, i, Assignment::new(bits), cfg.encoding)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitFile {
    pub split: Split,
    pub file: String,
    pub permuted: bool,
    pub count: usize,
    pub label_ones: usize,
    pub label_mean: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub config: DatasetConfig,
    pub config_hash: String,
    pub separators_per_example: usize,
    pub tokens_per_example: usize,
    pub files: Vec<SplitFile>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

pub fn split_file_name(split: Split, permuted: bool) -> String {
    if permuted {
        format!("{}_perm.jsonl", split.name())
    } else {
        format!("{}.jsonl", split.name())
    }
}

/// Writes `train.jsonl`, `val.jsonl`, `test.jsonl` (plus `test_perm.jsonl`
/// when `cfg.permuted`) and `manifest.json` into `out_dir`.
pub fn generate_split(cfg: &DatasetConfig, out_dir: &Path) -> Result<Manifest> {
    cfg.validate()?;
    std::fs::create_dir_all(out_dir)?;
    let mut files = Vec::new();
    let mut shape = (0usize, 0usize);
    for split in Split::ALL {
        let examples = generate_examples(cfg, split)?;
        if let Some(e) = examples.first() {
            shape = (e.aux.len(), e.tokens.len());
        }
        files.push(write_split(out_dir, split, false, &examples)?);
        if cfg.permuted && split == Split::Test {
            let permuted = examples
                .iter()
                .map(|e| permute_leaves(e, permutation_seed(cfg.seed, split, e.id)))
                .collect::<Result<Vec<_>>>()?;
            files.push(write_split(out_dir, split, true, &permuted)?);
        }
    }
    let manifest = Manifest {
        config: cfg.clone(),
        config_hash: cfg.hash(),
        separators_per_example: shape.0,
        tokens_per_example: shape.1,
        files,
    };
    let mut f = BufWriter::new(File::create(out_dir.join(MANIFEST_FILE))?);
    serde_json::to_writer_pretty(&mut f, &manifest)?;
    f.write_all(b"\n")?;
    f.flush()?;
    Ok(manifest)
}

fn write_split(dir: &Path, split: Split, permuted: bool, examples: &[Example]) -> Result<SplitFile> {
    let file = split_file_name(split, permuted);
    write_examples(&dir.join(&file), examples)?;
    let label_ones = examples.iter().filter(|e| e.label).count();
    Ok(SplitFile {
        split,
        file,
        permuted,
        count: examples.len(),
        label_ones,
        label_mean: if examples.is_empty() {
            0.0
        } else {
            label_ones as f64 / examples.len() as f64
        },
    })
}

pub fn write_examples(path: &Path, examples: &[Example]) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    for e in examples {
        serde_json::to_writer(&mut f, e)?;
        f.write_all(b"\n")?;
    }
    f.flush()?;
    Ok(())
}

pub fn read_examples(path: &Path) -> Result<Vec<Example>> {
    let f = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (lineno, line) in f.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| {
            Error::Format(format!("{}:{}: {e}", path.display(), lineno + 1))
        })?);
    }
    Ok(out)
}

pub fn read_manifest(dir: &Path) -> Result<Manifest> {
    let f = BufReader::new(File::open(dir.join(MANIFEST_FILE))?);
    Ok(serde_json::from_reader(f)?)
}

/// Paths of every JSONL file listed in a manifest.
pub fn manifest_paths(dir: &Path, manifest: &Manifest) -> Vec<PathBuf> {
    manifest.files.iter().map(|f| dir.join(&f.file)).collect()
}

/// Smallest `d` with `k^d = n`, if any.
pub fn depth_for_leaves(k: usize, n: usize) -> Option<usize> {
    let mut width = 1usize;
    for d in 0..64 {
        if width == n {
            return Some(d);
        }
        if k < 2 || width > n {
            return None;
        }
        width = width.checked_mul(k)?;
    }
    None
}

pub(crate) mod bit {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(b: &bool, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(*b as u8)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<bool, D::Error> {
        match u8::deserialize(d)? {
            0 => Ok(false),
            1 => Ok(true),
            v => Err(serde::de::Error::custom(format!("expected 0 or 1, got {v}"))),
        }
    }
}

pub(crate) mod bits {
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[bool], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for b in v {
            seq.serialize_element(&(*b as u8))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<bool>, D::Error> {
        Vec::<u8>::deserialize(d)?
            .into_iter()
            .map(|v| match v {
                0 => Ok(false),
                1 => Ok(true),
                v => Err(serde::de::Error::custom(format!("expected 0 or 1, got {v}"))),
            })
            .collect()
    }
}

pub(crate) mod opt_bits {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<bool>>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref()
            .map(|bits| bits.iter().map(|&b| b as u8).collect::<Vec<u8>>())
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<bool>>, D::Error> {
        Option::<Vec<u8>>::deserialize(d)?
            .map(|v| {
                v.into_iter()
                    .map(|b| match b {
                        0 => Ok(false),
                        1 => Ok(true),
                        b => Err(serde::de::Error::custom(format!("expected 0 or 1, got {b}"))),
                    })
                    .collect()
            })
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(d: usize) -> PrereqTree {
        build_balanced_tree(3, d, RuleSpec::Majority).unwrap()
    }

    #[test]
    fn scaffold_depth_one() {
        let t = tree(1);
        let x = Assignment::from_01(&[1, 0, 1]);
        let tr = t.evaluate(&x).unwrap();
        let (tokens, aux) = encode_scaffold(&t, &x, &tr).unwrap();
        assert_eq!(tokens, ["1", "0", "1", "]_1"]);
        assert_eq!(aux, vec![AuxLabel { pos: 3, level: 1, value: true }]);
    }

    #[test]
    fn scaffold_depth_two_layout() {
        let t = tree(2);
        let x = Assignment::from_01(&[1, 1, 0, 0, 0, 0, 1, 0, 1]);
        let tr = t.evaluate(&x).unwrap();
        let (tokens, aux) = encode_scaffold(&t, &x, &tr).unwrap();
        let expect = "1 1 0 ]_1 0 0 0 ]_1 1 0 1 ]_1 ]_2";
        assert_eq!(tokens.join(" "), expect);
        let got: Vec<_> = aux.iter().map(|a| (a.pos, a.level, a.value)).collect();
        assert_eq!(got, [(3, 1, true), (7, 1, false), (11, 1, true), (12, 2, true)]);
    }

    #[test]
    fn scaffold_depth_six_counts() {
        let t = tree(6);
        let x = Assignment::new(vec![false; 729]);
        let tr = t.evaluate(&x).unwrap();
        let (tokens, aux) = encode_scaffold(&t, &x, &tr).unwrap();
        assert_eq!(aux.len(), 364);
        assert_eq!(tokens.len(), 1093);
        assert_eq!(tokens.last().unwrap(), "]_6");
    }

    #[test]
    fn scaffold_rejects_mismatch() {
        let t = tree(2);
        let x = Assignment::from_01(&[1, 0, 1]);
        let tr = tree(1).evaluate(&x).unwrap();
        assert!(encode_scaffold(&t, &x, &tr).is_err());
    }

    #[test]
    fn flat_encoding() {
        assert_eq!(encode_flat(&Assignment::from_01(&[1, 0, 1])), ["1", "0", "1"]);
        let t = tree(3);
        let e = make_example(&t, 0, Assignment::new(vec![false; 27]), Encoding::Flat).unwrap();
        assert_eq!(e.tokens.len(), 27);
        assert!(!e.label);
        assert!(e.aux.is_empty());
    }

    #[test]
    fn identity_and_invariant_permutations() {
        let t = tree(2);
        let x = Assignment::from_01(&[1, 1, 0, 0, 0, 0, 1, 0, 1]);
        let e = make_example(&t, 5, x, Encoding::Scaffold).unwrap();
        let id: Vec<usize> = (0..9).collect();
        let p = permute_leaves_with(&e, &id).unwrap();
        assert_eq!((p.leaves.clone(), p.tokens.clone(), p.label), (e.leaves.clone(), e.tokens.clone(), e.label));

        let ones = make_example(&t, 1, Assignment::new(vec![true; 9]), Encoding::Scaffold).unwrap();
        let p = permute_leaves(&ones, 99).unwrap();
        assert_eq!(p.tokens, ones.tokens);
        assert_eq!(p.label, ones.label);
        assert!(permute_leaves_with(&e, &[0, 0, 1, 2, 3, 4, 5, 6, 7]).is_err());
    }

    #[test]
    fn permutation_records_original() {
        let t = tree(2);
        let x = Assignment::from_01(&[1, 1, 0, 0, 0, 0, 1, 0, 1]);
        let e = make_example(&t, 0, x.clone(), Encoding::Flat).unwrap();
        let p = permute_leaves(&e, 7).unwrap();
        assert_eq!(p.original_leaves().unwrap(), x.bits());
        let pp = permute_leaves(&p, 8).unwrap();
        assert_eq!(pp.original_leaves().unwrap(), x.bits());
    }

    #[test]
    fn json_field_contract() {
        let t = tree(1);
        let e = make_example(&t, 3, Assignment::from_01(&[1, 0, 1]), Encoding::Scaffold).unwrap();
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(
            s,
            r#"{"id":3,"leaves":[1,0,1],"label":1,"tokens":["1","0","1","]_1"],"aux":[{"pos":3,"level":1,"value":1}],"perm":null}"#
        );
        let back: Example = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
        assert!(serde_json::from_str::<Example>(&s.replace("\"label\":1", "\"label\":2")).is_err());
    }

    #[test]
    fn seeds_are_split_and_index_specific() {
        let a = example_seed(42, Split::Train, 0);
        assert_ne!(a, example_seed(42, Split::Val, 0));
        assert_ne!(a, example_seed(42, Split::Train, 1));
        assert_ne!(a, example_seed(43, Split::Train, 0));
        assert_eq!(a, example_seed(42, Split::Train, 0));
    }

    #[test]
    fn config_validation() {
        let mut cfg = DatasetConfig::new(9);
        assert!(matches!(cfg.validate(), Err(Error::SizeLimit(_))));
        cfg.depth = 3;
        cfg.p = -0.1;
        assert!(cfg.validate().is_err());
        cfg.p = 0.5;
        cfg.k = 4;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn depth_inference() {
        assert_eq!(depth_for_leaves(3, 1), Some(0));
        assert_eq!(depth_for_leaves(3, 729), Some(6));
        assert_eq!(depth_for_leaves(3, 10), None);
    }
}
