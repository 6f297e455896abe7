//! Prediction files and the permutation diagnostic.
//!
//! A prediction file is JSON lines. The first line is the header
//! `{"depth":4,"encoding":"scaffold","model_tag":"..."}`; every following
//! line is `{"id":0,"pred_root":1,"pred_aux":[1,0,...]|null}` with
//! `pred_aux` aligned to the example's `aux` list.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::datasets::{encode_scaffold, Encoding, Example};
use crate::trees::{Assignment, PrereqTree};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionHeader {
    pub depth: usize,
    pub encoding: Encoding,
    pub model_tag: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub id: u64,
    #[serde(with = "crate::datasets::bit")]
    pub pred_root: bool,
    #[serde(default, with = "crate::datasets::opt_bits")]
    pub pred_aux: Option<Vec<bool>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredictionFile {
    pub header: PredictionHeader,
    pub records: Vec<PredictionRecord>,
}

impl PredictionFile {
    pub fn read(path: &Path) -> Result<Self> {
        let f = BufReader::new(File::open(path)?);
        let mut lines = f.lines().enumerate().filter(|(_, l)| match l {
            Ok(l) => !l.trim().is_empty(),
            Err(_) => true,
        });
        let header = match lines.next() {
            Some((_, line)) => serde_json::from_str(&line?)
                .map_err(|e| Error::Format(format!("{}: bad header: {e}", path.display())))?,
            None => return Err(Error::Format(format!("{}: empty prediction file", path.display()))),
        };
        let records = lines
            .map(|(n, line)| {
                serde_json::from_str(&line?)
                    .map_err(|e| Error::Format(format!("{}:{}: {e}", path.display(), n + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PredictionFile { header, records })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut f = BufWriter::new(File::create(path)?);
        serde_json::to_writer(&mut f, &self.header)?;
        f.write_all(b"\n")?;
        for r in &self.records {
            serde_json::to_writer(&mut f, r)?;
            f.write_all(b"\n")?;
        }
        f.flush()?;
        Ok(())
    }
}

/// Predictions of the true evaluator run on each example's stored leaves
/// (the shuffled ones, for a permuted file).
pub fn oracle_predictions(tree: &PrereqTree, examples: &[Example]) -> Result<Vec<PredictionRecord>> {
    examples
        .iter()
        .map(|e| {
            let x = Assignment::new(e.leaves.clone());
            let trace = tree.evaluate(&x)?;
            let pred_aux = if e.aux.is_empty() {
                None
            } else {
                let (_, aux) = encode_scaffold(tree, &x, &trace)?;
                Some(aux.iter().map(|a| a.value).collect())
            };
            Ok(PredictionRecord {
                id: e.id,
                pred_root: trace.root_value(),
                pred_aux,
            })
        })
        .collect()
}

/// Predicts `value` for the root and every separator.
pub fn constant_predictions(examples: &[Example], value: bool) -> Vec<PredictionRecord> {
    examples
        .iter()
        .map(|e| PredictionRecord {
            id: e.id,
            pred_root: value,
            pred_aux: (!e.aux.is_empty()).then(|| vec![value; e.aux.len()]),
        })
        .collect()
}

/// Accuracies in percent.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagnoseReport {
    pub examples: usize,
    pub root_acc: f64,
    pub root_acc_perm: f64,
    /// `root_acc - root_acc_perm`; positive means permutation hurt.
    pub drop: f64,
    /// Over every separator position of the original split.
    pub aux_acc: Option<f64>,
    pub aux_acc_per_level: BTreeMap<usize, f64>,
    pub aux_acc_perm: Option<f64>,
}

#[derive(Default)]
struct Tally {
    root_hits: usize,
    root_total: usize,
    aux_hits: usize,
    aux_total: usize,
    per_level: BTreeMap<usize, (usize, usize)>,
}

fn tally(examples: &[Example], preds: &[PredictionRecord], what: &str) -> Result<Tally> {
    if examples.len() != preds.len() {
        return Err(Error::Format(format!(
            "{what}: {} examples but {} predictions",
            examples.len(),
            preds.len()
        )));
    }
    let mut by_id: HashMap<u64, &PredictionRecord> = HashMap::with_capacity(preds.len());
    for p in preds {
        if by_id.insert(p.id, p).is_some() {
            return Err(Error::Format(format!("{what}: duplicate prediction id {}", p.id)));
        }
    }
    let mut t = Tally::default();
    for e in examples {
        let p = by_id
            .get(&e.id)
            .ok_or_else(|| Error::Format(format!("{what}: no prediction for id {}", e.id)))?;
        t.root_total += 1;
        t.root_hits += usize::from(p.pred_root == e.label);
        if e.aux.is_empty() {
            continue;
        }
        let pa = p.pred_aux.as_ref().ok_or_else(|| {
            Error::Format(format!("{what}: id {} has aux labels but no pred_aux", e.id))
        })?;
        if pa.len() != e.aux.len() {
            return Err(Error::Format(format!(
                "{what}: id {} has {} separators but {} aux predictions",
                e.id,
                e.aux.len(),
                pa.len()
            )));
        }
        for (a, &guess) in e.aux.iter().zip(pa) {
            let hit = usize::from(a.value == guess);
            t.aux_hits += hit;
            t.aux_total += 1;
            let lvl = t.per_level.entry(a.level).or_default();
            lvl.0 += hit;
            lvl.1 += 1;
        }
    }
    Ok(t)
}

fn pct(hits: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * hits as f64 / total as f64
    }
}

/// Paired accuracy on an original split and its leaf-permuted copy.
pub fn diagnose(
    dataset: &[Example],
    permuted: &[Example],
    preds: &PredictionFile,
    preds_perm: &PredictionFile,
) -> Result<DiagnoseReport> {
    let mut orig_ids: Vec<u64> = dataset.iter().map(|e| e.id).collect();
    let mut perm_ids: Vec<u64> = permuted.iter().map(|e| e.id).collect();
    orig_ids.sort_unstable();
    perm_ids.sort_unstable();
    if orig_ids != perm_ids {
        return Err(Error::Format(
            "original and permuted datasets have different ids".into(),
        ));
    }
    // scaffold examples close the root with the deepest separator
    if let Some(depth) = dataset.first().and_then(|e| e.aux.iter().map(|a| a.level).max()) {
        for (h, what) in [(&preds.header, "predictions"), (&preds_perm.header, "permuted predictions")] {
            if h.depth != depth {
                return Err(Error::Format(format!(
                    "{what}: header depth {} but dataset depth {depth}",
                    h.depth
                )));
            }
        }
    }
    let a = tally(dataset, &preds.records, "predictions")?;
    let b = tally(permuted, &preds_perm.records, "permuted predictions")?;
    let root_acc = pct(a.root_hits, a.root_total);
    let root_acc_perm = pct(b.root_hits, b.root_total);
    Ok(DiagnoseReport {
        examples: a.root_total,
        root_acc,
        root_acc_perm,
        drop: root_acc - root_acc_perm,
        aux_acc: (a.aux_total > 0).then(|| pct(a.aux_hits, a.aux_total)),
        aux_acc_per_level: a
            .per_level
            .iter()
            .map(|(&l, &(h, t))| (l, pct(h, t)))
            .collect(),
        aux_acc_perm: (b.aux_total > 0).then(|| pct(b.aux_hits, b.aux_total)),
    })
}
