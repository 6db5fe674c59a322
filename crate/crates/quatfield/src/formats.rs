//! JSON documents read by the commands, CSV/JSON writers, and atomic file output.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use quatfield_core::fock::{ModeEntry, ModeTable, Scheme, Species, SpeciesSet};
use quatfield_core::{Convention, FourVector, PlaneWaveSpec, Sign};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A classical plane-wave solution as stored on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDoc {
    pub m: f64,
    pub theta: [f64; 4],
    #[serde(rename = "Theta0")]
    pub theta0: f64,
    pub k0: [f64; 4],
    pub k1: [f64; 4],
    pub s0: i8,
    pub s1: i8,
}

impl SpecDoc {
    pub fn to_spec(&self) -> Result<PlaneWaveSpec, CliError> {
        let sign = |s: i8, name: &str| {
            Sign::from_i8(s).ok_or_else(|| CliError::Input(format!("{name} must be +1 or -1, got {s}")))
        };
        Ok(PlaneWaveSpec {
            m: self.m,
            theta: FourVector::from_array(self.theta),
            theta0: self.theta0,
            k0: FourVector::from_array(self.k0),
            k1: FourVector::from_array(self.k1),
            s0: sign(self.s0, "s0")?,
            s1: sign(self.s1, "s1")?,
        })
    }

    pub fn from_spec(spec: &PlaneWaveSpec) -> Self {
        Self {
            m: spec.m,
            theta: spec.theta.to_array(),
            theta0: spec.theta0,
            k0: spec.k0.to_array(),
            k1: spec.k1.to_array(),
            s0: spec.s0.to_i8(),
            s1: spec.s1.to_i8(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpeciesDoc {
    Particle,
    Antiparticle,
}

impl From<SpeciesDoc> for Species {
    fn from(s: SpeciesDoc) -> Self {
        match s {
            SpeciesDoc::Particle => Species::Particle,
            SpeciesDoc::Antiparticle => Species::Antiparticle,
        }
    }
}

impl From<Species> for SpeciesDoc {
    fn from(s: Species) -> Self {
        match s {
            Species::Particle => SpeciesDoc::Particle,
            Species::Antiparticle => SpeciesDoc::Antiparticle,
        }
    }
}

/// One mode: component index within the scheme, species and four-momentum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeDoc {
    pub scheme: u8,
    pub species: SpeciesDoc,
    pub p: [f64; 4],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeTableDoc {
    pub m: f64,
    /// Number of complex components: 4 or 2.
    pub components: u8,
    pub entries: Vec<ModeDoc>,
}

impl ModeTableDoc {
    pub fn to_table(&self) -> Result<ModeTable, CliError> {
        let scheme = match self.components {
            4 => Scheme::FourComponent,
            2 => Scheme::TwoComponent,
            n => return Err(CliError::Input(format!("components must be 4 or 2, got {n}"))),
        };
        let entries = self
            .entries
            .iter()
            .map(|e| ModeEntry { index: e.scheme, species: e.species.into(), momentum: FourVector::from_array(e.p) })
            .collect();
        ModeTable::new(self.m, scheme, entries).map_err(CliError::input)
    }

    pub fn from_table(table: &ModeTable) -> Self {
        Self {
            m: table.mass(),
            components: table.scheme().component_count(),
            entries: table
                .entries()
                .iter()
                .map(|e| ModeDoc { scheme: e.index, species: e.species.into(), p: e.momentum.to_array() })
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpeciesChoice {
    Particles,
    #[default]
    Both,
}

impl From<SpeciesChoice> for SpeciesSet {
    fn from(c: SpeciesChoice) -> Self {
        match c {
            SpeciesChoice::Particles => SpeciesSet::ParticlesOnly,
            SpeciesChoice::Both => SpeciesSet::Both,
        }
    }
}

/// An explicit table, or the four-component table at a spec's effective momenta.
pub fn resolve_table(
    modes: Option<&ModeTableDoc>,
    spec: Option<&SpecDoc>,
    species: SpeciesChoice,
) -> Result<ModeTable, CliError> {
    match (modes, spec) {
        (Some(doc), None) => doc.to_table(),
        (None, Some(spec)) => ModeTable::four_component(&spec.to_spec()?, species.into()).map_err(CliError::input),
        _ => Err(CliError::Input("give exactly one of `modes` or `spec`".into())),
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse { path: path.to_path_buf(), source })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types always serialize");
    s.push('\n');
    s
}

/// Shortest round-trip text, switching to exponent form for very small or large magnitudes.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// CSV text with a leading `# convention=…` comment line.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(convention: Convention, header: &[&str]) -> Self {
        let mut text = format!("# convention={convention}\n");
        text.push_str(&header.join(","));
        text.push('\n');
        Self { text }
    }

    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut first = true;
        for c in cells {
            if !first {
                self.text.push(',');
            }
            first = false;
            let _ = write!(self.text, "{}", c.as_ref());
        }
        self.text.push('\n');
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

/// Writes via a temporary file in the target directory, then renames over the target.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let err = |source| CliError::Write { path: path.to_path_buf(), source };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(err)?;
    tmp.write_all(contents.as_bytes()).map_err(err)?;
    tmp.as_file().sync_all().map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}

/// Sends output to `--out` when given, otherwise to stdout.
pub fn emit(out: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write_atomic(p, contents),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .map_err(|source| CliError::Write { path: PathBuf::from("<stdout>"), source })
        }
    }
}
