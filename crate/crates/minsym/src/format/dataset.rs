//! Canonical dataset format: `manifest.json` plus `dataset.jsonl`, one game
//! instance per line, ordered by (bucket, draw id).

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use minsym_core::sampler::{LabeledDataset, LabeledInstance, MinSymHistogram, SamplerConfig};
use minsym_core::split::DEFAULT_TRAIN_RATIO;
use minsym_core::{solve_min_sym_enum, AttributeSpace, GameInstance, ObjectVector};
use serde::{Deserialize, Serialize};

use super::{check_version, create, FORMAT_VERSION};
use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const RECORDS_FILE: &str = "dataset.jsonl";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSizes {
    pub train: usize,
    pub eval: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub train_ratio: f64,
    pub buckets: BTreeMap<usize, SplitSizes>,
}

impl SplitPlan {
    pub fn new(counts: &BTreeMap<usize, usize>, train_ratio: f64) -> Self {
        let buckets = counts
            .iter()
            .map(|(&k, &n)| {
                let train = (n as f64 * train_ratio).round() as usize;
                (k, SplitSizes { train, eval: n - train })
            })
            .collect();
        Self { train_ratio, buckets }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub format_version: u32,
    pub num_attributes: usize,
    pub num_values: usize,
    pub num_distractors: usize,
    pub seed: u64,
    pub per_bucket_target: usize,
    pub tracked_buckets: Vec<usize>,
    pub max_attempts: u64,
    pub attempts: u64,
    /// False when sampling gave up before filling every bucket.
    pub complete: bool,
    pub bucket_counts: BTreeMap<usize, usize>,
    pub split: SplitPlan,
    pub histogram: MinSymHistogram,
    pub records_file: String,
}

impl DatasetManifest {
    pub fn from_dataset(ds: &LabeledDataset) -> Self {
        let c = &ds.config;
        let bucket_counts: BTreeMap<usize, usize> = ds.buckets.iter().map(|(&k, v)| (k, v.len())).collect();
        Self {
            format_version: FORMAT_VERSION,
            num_attributes: c.space.num_attributes(),
            num_values: c.space.num_values(),
            num_distractors: c.num_distractors,
            seed: c.seed,
            per_bucket_target: c.per_bucket_target,
            tracked_buckets: c.tracked_buckets.iter().copied().collect(),
            max_attempts: c.max_attempts,
            attempts: ds.attempts,
            complete: ds.is_complete(),
            split: SplitPlan::new(&bucket_counts, DEFAULT_TRAIN_RATIO),
            bucket_counts,
            histogram: ds.histogram.clone(),
            records_file: RECORDS_FILE.to_string(),
        }
    }

    pub fn space(&self) -> minsym_core::Result<AttributeSpace> {
        AttributeSpace::new(self.num_attributes, self.num_values)
    }

    pub fn config(&self) -> minsym_core::Result<SamplerConfig> {
        let config = SamplerConfig {
            space: self.space()?,
            num_distractors: self.num_distractors,
            per_bucket_target: self.per_bucket_target,
            tracked_buckets: self.tracked_buckets.iter().copied().collect(),
            seed: self.seed,
            max_attempts: self.max_attempts,
        };
        config.validate()?;
        Ok(config)
    }
}

/// One line of `dataset.jsonl`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub id: u64,
    pub min_m: usize,
    pub target_index: usize,
    pub objects: Vec<Vec<u16>>,
}

impl Record {
    pub fn from_instance(li: &LabeledInstance) -> Self {
        Self {
            id: li.id,
            min_m: li.min_symbols,
            target_index: li.instance.target_index(),
            objects: li.instance.objects().iter().map(|o| o.values().to_vec()).collect(),
        }
    }

    pub fn to_instance(&self, space: &AttributeSpace) -> minsym_core::Result<LabeledInstance> {
        let objects = self
            .objects
            .iter()
            .map(|o| ObjectVector::new(space, o.clone()))
            .collect::<minsym_core::Result<Vec<_>>>()?;
        let instance = GameInstance::new(*space, objects, self.target_index)?;
        Ok(LabeledInstance { id: self.id, min_symbols: self.min_m, instance })
    }
}

/// Writes `manifest.json` and `dataset.jsonl` into `dir`. Refuses to
/// replace existing files unless `force` is set.
pub fn write_dataset(ds: &LabeledDataset, dir: &Path, force: bool) -> Result<DatasetManifest> {
    let manifest = DatasetManifest::from_dataset(ds);
    let manifest_path = dir.join(MANIFEST_FILE);
    let records_path = dir.join(RECORDS_FILE);
    if !force {
        for p in [&manifest_path, &records_path] {
            if p.exists() {
                return Err(Error::Exists(p.clone()));
            }
        }
    }
    let mut out = create(&records_path, true)?;
    for li in ds.instances() {
        serde_json::to_writer(&mut out, &Record::from_instance(li)).map_err(|e| Error::io(&records_path)(e.into()))?;
        out.write_all(b"\n").map_err(Error::io(&records_path))?;
    }
    out.flush().map_err(Error::io(&records_path))?;

    let mut out = create(&manifest_path, true)?;
    serde_json::to_writer_pretty(&mut out, &manifest).map_err(|e| Error::io(&manifest_path)(e.into()))?;
    out.write_all(b"\n").map_err(Error::io(&manifest_path))?;
    out.flush().map_err(Error::io(&manifest_path))?;
    Ok(manifest)
}

pub fn read_manifest(dir: &Path) -> Result<DatasetManifest> {
    let path = dir.join(MANIFEST_FILE);
    let text = fs::read_to_string(&path).map_err(Error::io(&path))?;
    let manifest: DatasetManifest = serde_json::from_str(&text).map_err(|e| Error::malformed(&path, e.line(), e))?;
    check_version(manifest.format_version)?;
    Ok(manifest)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ReadOptions {
    /// Re-solve every record with the enumeration solver and check that it
    /// lands in its bucket.
    pub verify: bool,
}

/// Reads a dataset written by [`write_dataset`], checking value ranges,
/// object counts and per-bucket record counts against the manifest.
pub fn read_dataset(dir: &Path, opts: ReadOptions) -> Result<LabeledDataset> {
    read_dataset_with_lines(dir, opts).map(|(ds, _)| ds)
}

/// Like [`read_dataset`], also returning the records-file line of every
/// instance, in [`LabeledDataset::instances`] order.
pub fn read_dataset_with_lines(dir: &Path, opts: ReadOptions) -> Result<(LabeledDataset, Vec<usize>)> {
    let manifest = read_manifest(dir)?;
    let manifest_path = dir.join(MANIFEST_FILE);
    let config = manifest.config().map_err(|e| Error::malformed(&manifest_path, 0, e))?;
    let space = config.space;
    let path: PathBuf = dir.join(&manifest.records_file);
    let file = File::open(&path).map_err(Error::io(&path))?;

    let mut buckets: BTreeMap<usize, Vec<(LabeledInstance, usize)>> =
        config.tracked_buckets.iter().map(|&k| (k, Vec::new())).collect();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(Error::io(&path))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: Record = serde_json::from_str(&line).map_err(|e| Error::malformed(&path, line_no, e))?;
        if rec.objects.len() != config.num_distractors + 1 {
            return Err(Error::malformed(
                &path,
                line_no,
                format!("expected {} objects, found {}", config.num_distractors + 1, rec.objects.len()),
            ));
        }
        let li = rec.to_instance(&space).map_err(|e| Error::malformed(&path, line_no, e))?;
        let Some(bucket) = buckets.get_mut(&rec.min_m) else {
            return Err(Error::malformed(&path, line_no, format!("min_m {} is not a tracked bucket", rec.min_m)));
        };
        if opts.verify {
            check_purity(&li, line_no)?;
        }
        bucket.push((li, line_no));
    }

    for (&k, expected) in &manifest.bucket_counts {
        let actual = buckets.get(&k).map_or(0, Vec::len);
        if actual != *expected {
            return Err(Error::CountMismatch { path, bucket: k, expected: *expected, actual });
        }
    }
    for (&k, b) in &buckets {
        if !manifest.bucket_counts.contains_key(&k) && !b.is_empty() {
            return Err(Error::CountMismatch { path, bucket: k, expected: 0, actual: b.len() });
        }
    }

    let lines = buckets.values().flatten().map(|&(_, l)| l).collect();
    let buckets = buckets.into_iter().map(|(k, b)| (k, b.into_iter().map(|(li, _)| li).collect())).collect();
    Ok((LabeledDataset { config, buckets, histogram: manifest.histogram, attempts: manifest.attempts }, lines))
}

pub(crate) fn check_purity(li: &LabeledInstance, line: usize) -> Result<()> {
    let solved = solve_min_sym_enum(&li.instance).min_symbols();
    if solved != Some(li.min_symbols) {
        return Err(Error::Purity {
            id: li.id,
            line,
            stored: li.min_symbols,
            actual: solved.map_or_else(|| "unsolvable".to_string(), |k| k.to_string()),
        });
    }
    Ok(())
}
