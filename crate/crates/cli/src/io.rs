//! JSON file formats: complex numbers are `[re, im]`, matrices are row-major
//! with explicit dimensions.

use std::collections::BTreeMap;
use std::path::Path;

use qhier_core::linalg::dim_pow;
use qhier_core::{Matrix, OperatorSequence, SequenceKind, SystemSpec, C64};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &Matrix) -> Self {
        let mut data = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                data.push([z.re, z.im]);
            }
        }
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            data,
        }
    }

    /// `path` names this matrix in diagnostics.
    pub fn to_matrix(&self, path: &str) -> Result<Matrix, CliError> {
        if self.data.len() != self.rows * self.cols {
            return Err(CliError::Schema(format!(
                "{path}.data: expected {} entries for {}x{}, got {}",
                self.rows * self.cols,
                self.rows,
                self.cols,
                self.data.len()
            )));
        }
        if let Some(k) = self.data.iter().position(|z| !(z[0].is_finite() && z[1].is_finite())) {
            return Err(CliError::Schema(format!("{path}.data[{k}]: non-finite entry")));
        }
        Ok(Matrix::from_row_iterator(
            self.rows,
            self.cols,
            self.data.iter().map(|z| C64::new(z[0], z[1])),
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemJson {
    pub d: usize,
    #[serde(default = "default_hbar")]
    pub hbar: f64,
    pub n_max: usize,
    pub one_body: MatrixJson,
    /// Keyed by the number of particles the potential couples.
    #[serde(default)]
    pub potentials: BTreeMap<String, MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim_cap: Option<usize>,
}

fn default_hbar() -> f64 {
    1.0
}

impl SystemJson {
    /// Builds and validates the model. Shape problems are schema errors;
    /// violated physical invariants come back as core errors.
    pub fn to_spec(&self) -> Result<Result<SystemSpec, qhier_core::Error>, CliError> {
        let one = self.one_body.to_matrix("system.one_body")?;
        let mut pots = BTreeMap::new();
        for (key, m) in &self.potentials {
            let k: usize = key
                .parse()
                .map_err(|_| CliError::Schema(format!("system.potentials.{key}: key must be a particle count")))?;
            pots.insert(k, m.to_matrix(&format!("system.potentials.{key}"))?);
        }
        let cap = self.dim_cap.unwrap_or(qhier_core::system::DEFAULT_DIM_CAP);
        Ok(SystemSpec::with_dim_cap(self.d, self.hbar, self.n_max, one, pots, cap))
    }

    pub fn from_spec(spec: &SystemSpec) -> Self {
        Self {
            d: spec.d(),
            hbar: spec.hbar(),
            n_max: spec.n_max(),
            one_body: MatrixJson::from_matrix(spec.one_body()),
            potentials: spec
                .potentials()
                .iter()
                .map(|(k, m)| (k.to_string(), MatrixJson::from_matrix(m)))
                .collect(),
            dim_cap: Some(spec.dim_cap()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindJson {
    State,
    Observable,
}

impl From<KindJson> for SequenceKind {
    fn from(k: KindJson) -> Self {
        match k {
            KindJson::State => SequenceKind::State,
            KindJson::Observable => SequenceKind::Observable,
        }
    }
}

impl From<SequenceKind> for KindJson {
    fn from(k: SequenceKind) -> Self {
        match k {
            SequenceKind::State => KindJson::State,
            SequenceKind::Observable => KindJson::Observable,
        }
    }
}

/// `entries[n]` acts on particles `1..=n`; `weight` is α for states and γ
/// for observables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceJson {
    pub kind: KindJson,
    pub d: usize,
    pub weight: f64,
    pub entries: Vec<MatrixJson>,
}

impl SequenceJson {
    pub fn from_sequence(x: &OperatorSequence) -> Self {
        Self {
            kind: x.kind().into(),
            d: x.d(),
            weight: x.weight(),
            entries: x.entries().iter().map(|e| MatrixJson::from_matrix(e.data())).collect(),
        }
    }

    pub fn to_sequence(&self, path: &str) -> Result<OperatorSequence, CliError> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for (n, m) in self.entries.iter().enumerate() {
            let p = format!("{path}.entries[{n}]");
            let side = dim_pow(self.d, n).map_err(|e| CliError::Schema(format!("{p}: {e}")))?;
            if m.rows != side || m.cols != side {
                return Err(CliError::Schema(format!(
                    "{p}: expected {side}x{side} for {n} particles of dimension {}, got {}x{}",
                    self.d, m.rows, m.cols
                )));
            }
            entries.push(m.to_matrix(&p)?);
        }
        OperatorSequence::new(self.d, self.kind.into(), self.weight, entries)
            .map_err(|e| CliError::Schema(format!("{path}: {e}")))
    }
}

/// Reads and deserializes a JSON file; errors carry the file and field path.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_json(&text, &path.display().to_string())
}

pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| CliError::Parse {
        path: origin.to_string(),
        field: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}
