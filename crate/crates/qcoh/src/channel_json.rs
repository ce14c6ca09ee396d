//! Channel files: `{"input_dim": n, "output_dim": m, "kraus": [K_1, ...]}`
//! where each `K` is a list of `m` rows of `n` entries `[re, im]`.

use std::fs;
use std::path::Path;

use qcoh_core::{c64, ComplexMatrix, KrausChannel};
use serde::{Deserialize, Serialize};

use crate::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub input_dim: usize,
    pub output_dim: usize,
    pub kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

impl ChannelFile {
    pub fn from_channel(phi: &KrausChannel) -> Self {
        let kraus = phi
            .kraus()
            .iter()
            .map(|k| (0..k.rows()).map(|r| (0..k.cols()).map(|c| [k[(r, c)].re, k[(r, c)].im]).collect()).collect())
            .collect();
        Self {
            input_dim: phi.input_dim(),
            output_dim: phi.output_dim(),
            kraus,
        }
    }

    /// Checks the shapes and the trace-preserving condition.
    pub fn to_channel(&self) -> CliResult<KrausChannel> {
        if self.input_dim == 0 || self.output_dim == 0 {
            return Err(CliError::Input("input_dim and output_dim must be positive".into()));
        }
        if self.kraus.is_empty() {
            return Err(CliError::Input("kraus list is empty".into()));
        }
        let mut ops = Vec::with_capacity(self.kraus.len());
        for (n, rows) in self.kraus.iter().enumerate() {
            if rows.len() != self.output_dim {
                return Err(CliError::Input(format!(
                    "kraus[{n}] has {} rows, expected output_dim = {}",
                    rows.len(),
                    self.output_dim
                )));
            }
            let mut data = Vec::with_capacity(self.output_dim * self.input_dim);
            for (r, row) in rows.iter().enumerate() {
                if row.len() != self.input_dim {
                    return Err(CliError::Input(format!(
                        "kraus[{n}] row {r} has {} entries, expected input_dim = {}",
                        row.len(),
                        self.input_dim
                    )));
                }
                data.extend(row.iter().map(|[re, im]| c64(*re, *im)));
            }
            ops.push(ComplexMatrix::from_vec(self.output_dim, self.input_dim, data)?);
        }
        Ok(KrausChannel::new(ops)?)
    }
}

pub fn parse_channel(text: &str) -> CliResult<KrausChannel> {
    let file: ChannelFile = serde_json::from_str(text).map_err(|e| CliError::Input(format!("invalid channel JSON: {e}")))?;
    file.to_channel()
}

pub fn load_channel(path: &Path) -> CliResult<KrausChannel> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_channel(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn channel_to_json(phi: &KrausChannel) -> String {
    serde_json::to_string_pretty(&ChannelFile::from_channel(phi)).expect("plain numbers serialize")
}
