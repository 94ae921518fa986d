//! One-hot export with a seeded train/eval split.
//!
//! `onehot_header.json` describes the dimensions; `train.txt` and
//! `eval.txt` hold instance blocks. A block is a line `id min_m
//! target_index` followed by one line per candidate with `|A| * |V|`
//! space-separated `0`/`1` entries.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use minsym_core::sampler::{LabeledDataset, LabeledInstance};
use minsym_core::split::split_indices;
use minsym_core::{AttributeSpace, GameInstance, ObjectVector};
use serde::{Deserialize, Serialize};

use super::{check_version, create, FORMAT_VERSION};
use crate::error::{Error, Result};

pub const HEADER_FILE: &str = "onehot_header.json";
pub const TRAIN_FILE: &str = "train.txt";
pub const EVAL_FILE: &str = "eval.txt";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneHotHeader {
    pub format_version: u32,
    pub num_attributes: usize,
    pub num_values: usize,
    pub row_width: usize,
    pub candidates_per_instance: usize,
    pub split_seed: u64,
    pub train_ratio: f64,
    pub buckets: Vec<usize>,
    pub train_instances: usize,
    pub eval_instances: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OneHotExport {
    pub header: OneHotHeader,
    pub train: Vec<LabeledInstance>,
    pub eval: Vec<LabeledInstance>,
}

/// Splits every bucket with its own stream `(split_seed, bucket)` and writes
/// the two halves in (bucket, id) order.
pub fn split_dataset(
    ds: &LabeledDataset,
    split_seed: u64,
    train_ratio: f64,
) -> Result<(Vec<&LabeledInstance>, Vec<&LabeledInstance>)> {
    let (mut train, mut eval) = (Vec::new(), Vec::new());
    for (&k, bucket) in &ds.buckets {
        let (t, e) = split_indices(bucket.len(), train_ratio, split_seed, k as u64)?;
        train.extend(t.into_iter().map(|i| &bucket[i]));
        eval.extend(e.into_iter().map(|i| &bucket[i]));
    }
    Ok((train, eval))
}

pub fn export_one_hot(
    ds: &LabeledDataset,
    dir: &Path,
    split_seed: u64,
    train_ratio: f64,
    force: bool,
) -> Result<OneHotHeader> {
    let space = ds.config.space;
    let (train, eval) = split_dataset(ds, split_seed, train_ratio)?;
    let header = OneHotHeader {
        format_version: FORMAT_VERSION,
        num_attributes: space.num_attributes(),
        num_values: space.num_values(),
        row_width: space.one_hot_width(),
        candidates_per_instance: ds.config.num_distractors + 1,
        split_seed,
        train_ratio,
        buckets: ds.buckets.keys().copied().collect(),
        train_instances: train.len(),
        eval_instances: eval.len(),
    };
    write_blocks(&space, &train, &dir.join(TRAIN_FILE), force)?;
    write_blocks(&space, &eval, &dir.join(EVAL_FILE), force)?;
    let path = dir.join(HEADER_FILE);
    let mut out = create(&path, force)?;
    serde_json::to_writer_pretty(&mut out, &header).map_err(|e| Error::io(&path)(e.into()))?;
    out.write_all(b"\n").map_err(Error::io(&path))?;
    out.flush().map_err(Error::io(&path))?;
    Ok(header)
}

fn write_blocks(space: &AttributeSpace, items: &[&LabeledInstance], path: &Path, force: bool) -> Result<()> {
    let mut out = create(path, force)?;
    let mut line = String::new();
    for li in items {
        writeln!(out, "{} {} {}", li.id, li.min_symbols, li.instance.target_index()).map_err(Error::io(path))?;
        for o in li.instance.objects() {
            line.clear();
            for (i, bit) in o.one_hot(space).into_iter().enumerate() {
                if i > 0 {
                    line.push(' ');
                }
                line.push(if bit == 1 { '1' } else { '0' });
            }
            line.push('\n');
            out.write_all(line.as_bytes()).map_err(Error::io(path))?;
        }
    }
    out.flush().map_err(Error::io(path))
}

pub fn read_one_hot(dir: &Path) -> Result<OneHotExport> {
    let path = dir.join(HEADER_FILE);
    let text = fs::read_to_string(&path).map_err(Error::io(&path))?;
    let header: OneHotHeader = serde_json::from_str(&text).map_err(|e| Error::malformed(&path, e.line(), e))?;
    check_version(header.format_version)?;
    let space =
        AttributeSpace::new(header.num_attributes, header.num_values).map_err(|e| Error::malformed(&path, 0, e))?;
    let train = read_blocks(&space, header.candidates_per_instance, &dir.join(TRAIN_FILE))?;
    let eval = read_blocks(&space, header.candidates_per_instance, &dir.join(EVAL_FILE))?;
    for (file, expected, actual) in
        [(TRAIN_FILE, header.train_instances, train.len()), (EVAL_FILE, header.eval_instances, eval.len())]
    {
        if expected != actual {
            return Err(Error::CountMismatch { path: dir.join(file), bucket: 0, expected, actual });
        }
    }
    Ok(OneHotExport { header, train, eval })
}

fn read_blocks(space: &AttributeSpace, candidates: usize, path: &Path) -> Result<Vec<LabeledInstance>> {
    let file = File::open(path).map_err(Error::io(path))?;
    let mut lines = BufReader::new(file).lines().enumerate();
    let mut out = Vec::new();
    while let Some((i, head)) = lines.next() {
        let head = head.map_err(Error::io(path))?;
        let fields: Vec<u64> = head
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::malformed(path, i + 1, e))?;
        let [id, min_m, target] = fields[..] else {
            return Err(Error::malformed(path, i + 1, "expected `id min_m target_index`"));
        };
        let mut objects = Vec::with_capacity(candidates);
        for _ in 0..candidates {
            let (j, row) = lines.next().ok_or_else(|| Error::malformed(path, i + 1, "truncated instance block"))?;
            let row = row.map_err(Error::io(path))?;
            let bits: Vec<u8> = row
                .split_whitespace()
                .map(|t| match t {
                    "0" => Ok(0),
                    "1" => Ok(1),
                    _ => Err(Error::malformed(path, j + 1, format!("not a bit: {t:?}"))),
                })
                .collect::<Result<_>>()?;
            objects.push(ObjectVector::from_one_hot(space, &bits).map_err(|e| Error::malformed(path, j + 1, e))?);
        }
        let instance =
            GameInstance::new(*space, objects, target as usize).map_err(|e| Error::malformed(path, i + 1, e))?;
        out.push(LabeledInstance { id, min_symbols: min_m as usize, instance });
    }
    Ok(out)
}
