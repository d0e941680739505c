//! Frozen slack maxima. A verify run passes when no measurement exceeds its frozen value;
//! values only change through an explicit refreeze.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use algostat::verify::{Experiment, Key, Measurement};
use algostat::CODEBOOK_VERSION;
use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Entry {
    experiment: Experiment,
    n: u32,
    l: u32,
    family: String,
    max_millibits: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SlackBaseline {
    entries: BTreeMap<Key, i64>,
}

#[derive(Serialize, Deserialize)]
struct File {
    codebook_version: u32,
    entries: Vec<Entry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Within,
    Exceeded,
    /// No frozen value for this key: the grid grew.
    Unfrozen,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub key: Key,
    pub measured: i64,
    pub frozen: Option<i64>,
    pub status: Status,
}

/// What happened to the baseline file during a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FreezeOutcome {
    Created,
    Unchanged,
    Refrozen,
    Refused,
}

impl SlackBaseline {
    pub fn from_measurements(ms: &[Measurement]) -> Self {
        let mut b = Self::default();
        b.absorb(ms);
        b
    }

    fn absorb(&mut self, ms: &[Measurement]) {
        for m in ms {
            self.entries.insert(m.key.clone(), m.value);
        }
    }

    pub fn get(&self, key: &Key) -> Option<i64> {
        self.entries.get(key).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_json(&self) -> String {
        let file = File {
            codebook_version: CODEBOOK_VERSION,
            entries: self
                .entries
                .iter()
                .map(|(k, v)| Entry { experiment: k.experiment, n: k.n, l: k.l, family: k.family.clone(), max_millibits: *v })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("plain data") + "\n"
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: File = serde_json::from_str(s).context("malformed baseline file")?;
        anyhow::ensure!(
            file.codebook_version == CODEBOOK_VERSION,
            "baseline was frozen for codebook version {}, this build has {CODEBOOK_VERSION}",
            file.codebook_version
        );
        let entries = file
            .entries
            .into_iter()
            .map(|e| (Key { experiment: e.experiment, n: e.n, l: e.l, family: e.family }, e.max_millibits))
            .collect();
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Option<Self>> {
        match fs::read_to_string(path) {
            Ok(s) => Ok(Some(Self::from_json(&s).with_context(|| format!("reading {}", path.display()))?)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e).with_context(|| format!("reading {}", path.display())),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, self.to_json()).with_context(|| format!("writing {}", path.display()))
    }

    pub fn compare(&self, ms: &[Measurement]) -> Vec<Verdict> {
        ms.iter()
            .map(|m| {
                let frozen = self.get(&m.key);
                let status = match frozen {
                    None => Status::Unfrozen,
                    Some(f) if m.value <= f => Status::Within,
                    Some(_) => Status::Exceeded,
                };
                Verdict { key: m.key.clone(), measured: m.value, frozen, status }
            })
            .collect()
    }
}

/// Compares `ms` with the file at `path`: a missing file is created from `ms`; keys that
/// are new or exceeded are written only with `refreeze`.
pub fn freeze_baselines(path: &Path, ms: &[Measurement], refreeze: bool) -> Result<(FreezeOutcome, Vec<Verdict>)> {
    let Some(mut base) = SlackBaseline::load(path)? else {
        let base = SlackBaseline::from_measurements(ms);
        base.save(path)?;
        return Ok((FreezeOutcome::Created, base.compare(ms)));
    };
    let verdicts = base.compare(ms);
    let dirty = verdicts.iter().any(|v| v.status != Status::Within);
    if !dirty {
        return Ok((FreezeOutcome::Unchanged, verdicts));
    }
    if !refreeze {
        return Ok((FreezeOutcome::Refused, verdicts));
    }
    base.absorb(ms);
    base.save(path)?;
    let after = base.compare(ms);
    Ok((FreezeOutcome::Refrozen, after))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(family: &str, n: u32, value: i64) -> Measurement {
        Measurement { key: Key { experiment: Experiment::Theorem1, n, l: 1, family: family.into() }, value }
    }

    #[test]
    fn json_round_trip_is_stable() {
        let b = SlackBaseline::from_measurements(&[m("cylinders", 4, 5120), m("hamming-balls", 3, 4096)]);
        let s = b.to_json();
        let back = SlackBaseline::from_json(&s).unwrap();
        assert_eq!(back, b);
        assert_eq!(back.to_json(), s);
    }

    #[test]
    fn freeze_lifecycle() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested/slack.json");
        let ms = vec![m("cylinders", 4, 5120)];
        let (o, v) = freeze_baselines(&path, &ms, false).unwrap();
        assert_eq!(o, FreezeOutcome::Created);
        assert!(v.iter().all(|v| v.status == Status::Within));
        let first = std::fs::read_to_string(&path).unwrap();

        let (o, _) = freeze_baselines(&path, &ms, false).unwrap();
        assert_eq!(o, FreezeOutcome::Unchanged);
        assert_eq!(std::fs::read_to_string(&path).unwrap(), first);

        // a lower measurement passes and leaves the file alone
        let (o, _) = freeze_baselines(&path, &[m("cylinders", 4, 1024)], false).unwrap();
        assert_eq!(o, FreezeOutcome::Unchanged);

        let bigger = vec![m("cylinders", 4, 5120), m("cylinders", 5, 6144)];
        let (o, v) = freeze_baselines(&path, &bigger, false).unwrap();
        assert_eq!(o, FreezeOutcome::Refused);
        assert_eq!(v[1].status, Status::Unfrozen);
        assert_eq!(std::fs::read_to_string(&path).unwrap(), first);

        let (o, v) = freeze_baselines(&path, &[m("cylinders", 4, 6000)], false).unwrap();
        assert_eq!(o, FreezeOutcome::Refused);
        assert_eq!(v[0].status, Status::Exceeded);

        let (o, _) = freeze_baselines(&path, &bigger, true).unwrap();
        assert_eq!(o, FreezeOutcome::Refrozen);
        let b = SlackBaseline::load(&path).unwrap().unwrap();
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn version_mismatch_is_rejected() {
        let s = r#"{"codebook_version": 999, "entries": []}"#;
        assert!(SlackBaseline::from_json(s).is_err());
    }
}
