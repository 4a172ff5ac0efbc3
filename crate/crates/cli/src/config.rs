//! Settings: defaults, then an optional TOML file, then flags, then
//! `WEYLAB_*` environment variables.

use std::path::Path;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Settings {
    pub tolerance: f64,
    pub m_max: usize,
    pub seed: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { tolerance: 1e-9, m_max: 7, seed: 7 }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileSettings {
    tolerance: Option<f64>,
    m_max: Option<usize>,
    seed: Option<u64>,
}

/// Values given on the command line.
#[derive(Debug, Default)]
pub struct Overrides {
    pub tolerance: Option<f64>,
    pub m_max: Option<usize>,
    pub seed: Option<u64>,
}

impl Settings {
    pub fn load(file: Option<&Path>, flags: &Overrides, env: impl Fn(&str) -> Option<String>) -> Result<Self, String> {
        let mut s = Settings::default();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let f: FileSettings = toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))?;
            s.apply(f.tolerance, f.m_max, f.seed);
        }
        s.apply(flags.tolerance, flags.m_max, flags.seed);
        let var = |key: &str| env(key).filter(|v| !v.is_empty());
        let tolerance = var("WEYLAB_TOLERANCE")
            .map(|v| v.parse::<f64>().map_err(|e| format!("WEYLAB_TOLERANCE={v}: {e}")))
            .transpose()?;
        let m_max = var("WEYLAB_M_MAX")
            .map(|v| v.parse::<usize>().map_err(|e| format!("WEYLAB_M_MAX={v}: {e}")))
            .transpose()?;
        let seed =
            var("WEYLAB_SEED").map(|v| v.parse::<u64>().map_err(|e| format!("WEYLAB_SEED={v}: {e}"))).transpose()?;
        s.apply(tolerance, m_max, seed);
        if !(s.tolerance > 0.0 && s.tolerance < 1.0) {
            return Err(format!("tolerance {} must lie in (0, 1)", s.tolerance));
        }
        if s.m_max == 0 || s.m_max > weylab::dense::MAX_DENSE_QUBITS {
            return Err(format!("m_max {} must lie in 1..={}", s.m_max, weylab::dense::MAX_DENSE_QUBITS));
        }
        Ok(s)
    }

    fn apply(&mut self, tolerance: Option<f64>, m_max: Option<usize>, seed: Option<u64>) {
        if let Some(t) = tolerance {
            self.tolerance = t;
        }
        if let Some(m) = m_max {
            self.m_max = m;
        }
        if let Some(x) = seed {
            self.seed = x;
        }
    }
}
