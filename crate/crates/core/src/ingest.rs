//! Loading the five-set Bonn EEG archive and assembling the binary
//! classification problems built from it.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use log::warn;
use serde::{Deserialize, Serialize};

use crate::dataset::ClassLabel;
use crate::error::{Error, Result};
use crate::series::TimeSeries;

pub const BONN_SAMPLE_RATE: f64 = 173.61;
pub const BONN_SIGNAL_LENGTH: usize = 4097;
pub const BONN_DATASET_ENV: &str = "BONN_EEG_ROOT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BonnSetId {
    A,
    B,
    C,
    D,
    E,
}

impl BonnSetId {
    pub const ALL: [BonnSetId; 5] = [Self::A, Self::B, Self::C, Self::D, Self::E];

    pub fn letter(self) -> char {
        match self {
            Self::A => 'A',
            Self::B => 'B',
            Self::C => 'C',
            Self::D => 'D',
            Self::E => 'E',
        }
    }

    /// Folder letter used by the distributed archive.
    pub fn archive_alias(self) -> char {
        match self {
            Self::A => 'Z',
            Self::B => 'O',
            Self::C => 'N',
            Self::D => 'F',
            Self::E => 'S',
        }
    }

    /// Accepts either naming, case-insensitively.
    pub fn from_name(name: &str) -> Option<Self> {
        let mut chars = name.chars();
        let c = chars.next()?.to_ascii_uppercase();
        if chars.next().is_some() {
            return None;
        }
        Self::ALL
            .into_iter()
            .find(|s| s.letter() == c || s.archive_alias() == c)
    }
}

impl fmt::Display for BonnSetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BonnSet {
    pub id: BonnSetId,
    pub signals: Vec<TimeSeries>,
}

/// Parses a text file holding one sample per line.
pub fn load_bonn_signal(path: &Path) -> Result<TimeSeries> {
    let text = fs::read_to_string(path)?;
    let mut samples = Vec::with_capacity(BONN_SIGNAL_LENGTH);
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let value: f64 = trimmed.parse().map_err(|_| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            content: trimmed.to_string(),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                content: trimmed.to_string(),
            });
        }
        samples.push(value);
    }
    if samples.is_empty() {
        return Err(Error::EmptyFile(path.to_path_buf()));
    }
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    TimeSeries::new(id, samples, BONN_SAMPLE_RATE)
}

/// Writes one sample per line in shortest round-trip form.
pub fn write_bonn_signal(path: &Path, samples: &[f64]) -> Result<()> {
    let mut out = std::io::BufWriter::new(fs::File::create(path)?);
    for s in samples {
        writeln!(out, "{}", crate::export::num(*s))?;
    }
    out.flush()?;
    Ok(())
}

/// Signal files (`*.txt`, any case) in a directory, sorted by name.
pub fn signal_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && p.extension()
                    .is_some_and(|e| e.eq_ignore_ascii_case("txt"))
        })
        .collect();
    files.sort();
    Ok(files)
}

/// Folder holding one set, matched by either naming.
pub fn set_directory(root: &Path, id: BonnSetId) -> Result<Option<PathBuf>> {
    let mut dirs: Vec<PathBuf> = fs::read_dir(root)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .and_then(BonnSetId::from_name)
                == Some(id)
        })
        .collect();
    dirs.sort();
    Ok(dirs.into_iter().next())
}

/// Logs one warning when members of a set differ from the archive's length.
pub fn warn_unusual_lengths(id: BonnSetId, signals: &[TimeSeries]) {
    let odd = signals.iter().filter(|s| s.len() != BONN_SIGNAL_LENGTH).count();
    if odd > 0 {
        warn!(
            "set {id}: {odd} of {} signals do not have {BONN_SIGNAL_LENGTH} samples",
            signals.len()
        );
    }
}

pub fn load_bonn_set(root: &Path, id: BonnSetId) -> Result<BonnSet> {
    let dir = set_directory(root, id)?.ok_or(Error::MissingSet(id.letter()))?;
    let files = signal_files(&dir)?;
    if files.is_empty() {
        return Err(Error::NoSignals(dir));
    }
    let signals = files
        .iter()
        .map(|p| load_bonn_signal(p).map(|s| s.with_label(id.letter().to_string())))
        .collect::<Result<Vec<_>>>()?;
    warn_unusual_lengths(id, &signals);
    Ok(BonnSet { id, signals })
}

/// All sets with a folder under `root`; missing sets are simply absent.
pub fn load_bonn_dataset(root: &Path) -> Result<BTreeMap<BonnSetId, BonnSet>> {
    let mut sets = BTreeMap::new();
    for id in BonnSetId::ALL {
        if set_directory(root, id)?.is_some() {
            sets.insert(id, load_bonn_set(root, id)?);
        }
    }
    Ok(sets)
}

/// The eight binary problems over the Bonn sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ProblemId {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
}

impl ProblemId {
    pub const ALL: [ProblemId; 8] = [
        Self::I,
        Self::II,
        Self::III,
        Self::IV,
        Self::V,
        Self::VI,
        Self::VII,
        Self::VIII,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::I => "I",
            Self::II => "II",
            Self::III => "III",
            Self::IV => "IV",
            Self::V => "V",
            Self::VI => "VI",
            Self::VII => "VII",
            Self::VIII => "VIII",
        }
    }

    pub fn problem(self) -> ClassificationProblem {
        use BonnSetId::*;
        let (positive, negative, description): (&[BonnSetId], &[BonnSetId], &str) = match self {
            Self::I => (&[A], &[E], "Healthy with eyes open vs Seizure"),
            Self::II => (&[B], &[E], "Healthy with eyes closed vs Seizure"),
            Self::III => (&[C], &[E], "Hippocampal Interictal vs Seizure"),
            Self::IV => (&[D], &[E], "Epileptogenic Interictal vs Seizure"),
            Self::V => (&[A, B], &[E], "Healthy vs Seizure"),
            Self::VI => (&[C, D], &[E], "Interictal vs Seizure"),
            Self::VII => (&[A, B], &[C, D], "Healthy vs Interictal"),
            Self::VIII => (&[A, B, C, D], &[E], "Seizure free vs Seizure"),
        };
        ClassificationProblem {
            id: self,
            positive_sets: positive.to_vec(),
            negative_sets: negative.to_vec(),
            description: description.to_string(),
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        let upper = upper.strip_prefix("CP-").unwrap_or(&upper);
        Self::ALL
            .into_iter()
            .find(|p| p.as_str() == upper)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown problem {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationProblem {
    pub id: ProblemId,
    pub positive_sets: Vec<BonnSetId>,
    pub negative_sets: Vec<BonnSetId>,
    pub description: String,
}

impl ClassificationProblem {
    pub fn label_of(&self, set: BonnSetId) -> Option<ClassLabel> {
        if self.positive_sets.contains(&set) {
            Some(ClassLabel::Positive)
        } else if self.negative_sets.contains(&set) {
            Some(ClassLabel::Negative)
        } else {
            None
        }
    }

    pub fn sets(&self) -> impl Iterator<Item = BonnSetId> + '_ {
        self.positive_sets.iter().chain(&self.negative_sets).copied()
    }
}

/// Labeled signals of one problem, positives first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledSignals {
    pub problem: ClassificationProblem,
    pub signals: Vec<(BonnSetId, TimeSeries, ClassLabel)>,
}

impl LabeledSignals {
    pub fn count(&self, label: ClassLabel) -> usize {
        self.signals.iter().filter(|(_, _, l)| *l == label).count()
    }
}

pub fn assemble_problem(
    id: ProblemId,
    sets: &BTreeMap<BonnSetId, BonnSet>,
) -> Result<LabeledSignals> {
    let problem = id.problem();
    let mut signals = Vec::new();
    for set_id in problem.sets() {
        let set = sets.get(&set_id).ok_or(Error::MissingSet(set_id.letter()))?;
        let label = problem.label_of(set_id).expect("set belongs to problem");
        signals.extend(set.signals.iter().map(|s| (set_id, s.clone(), label)));
    }
    Ok(LabeledSignals { problem, signals })
}
