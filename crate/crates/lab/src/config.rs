//! Experiment configuration.

use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use roundlab_core::tensor::MAX_QUBITS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    InfoIdentities,
    AverageEncoding,
    LocalTransition,
    ClassicalRoundelim,
    QuantumRoundelim,
    Reductions,
    CellprobeCompile,
    BoundTracers,
    GtProtocol,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::InfoIdentities,
        Suite::AverageEncoding,
        Suite::LocalTransition,
        Suite::ClassicalRoundelim,
        Suite::QuantumRoundelim,
        Suite::Reductions,
        Suite::CellprobeCompile,
        Suite::BoundTracers,
        Suite::GtProtocol,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::InfoIdentities => "info-identities",
            Suite::AverageEncoding => "average-encoding",
            Suite::LocalTransition => "local-transition",
            Suite::ClassicalRoundelim => "classical-roundelim",
            Suite::QuantumRoundelim => "quantum-roundelim",
            Suite::Reductions => "reductions",
            Suite::CellprobeCompile => "cellprobe-compile",
            Suite::BoundTracers => "bound-tracers",
            Suite::GtProtocol => "gt-protocol",
        }
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match Suite::ALL.iter().find(|x| x.name() == s) {
            Some(x) => Ok(*x),
            None => {
                let names: Vec<_> = Suite::ALL.iter().map(|x| x.name()).collect();
                bail!("unknown suite `{s}` (expected one of: {})", names.join(", "))
            }
        }
    }
}

/// Pass thresholds. The defaults match the acceptance targets.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    /// Chain identity residual.
    pub identity: f64,
    /// Entropy and information bounds.
    pub entropy: f64,
    pub encoding: f64,
    /// Overlap against fidelity, and the post-transition distance.
    pub transition: f64,
    /// Round-elimination certificates.
    pub certificate: f64,
    pub amplitude: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            identity: 1e-7,
            entropy: 1e-9,
            encoding: 1e-8,
            transition: 1e-8,
            certificate: 1e-7,
            amplitude: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Caps {
    /// Width of any simulated protocol, before and after transformation.
    pub qubits: usize,
    /// Largest universe in the FKS sweep.
    pub fks_universe: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            qubits: MAX_QUBITS,
            fks_universe: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub suite: Suite,
    pub seed: u64,
    pub caps: Caps,
    /// Overrides the suite's number of random cases or trials.
    pub trials: Option<usize>,
    pub tolerances: Tolerances,
    pub out: PathBuf,
    /// Adds wall time to each record; the output is then no longer reproducible.
    pub timings: bool,
}

fn env_parse<T: FromStr>(key: &str) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    match std::env::var(key) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|e| anyhow::anyhow!("{key}={v}: {e}")),
        Err(_) => Ok(None),
    }
}

impl ExperimentConfig {
    pub fn new(suite: Suite, seed: u64, out: impl Into<PathBuf>) -> Self {
        Self {
            suite,
            seed,
            caps: Caps::default(),
            trials: None,
            tolerances: Tolerances::default(),
            out: out.into(),
            timings: false,
        }
    }

    /// Reads `LAB_CAP_QUBITS`, `LAB_CAP_FKS_UNIVERSE`, `LAB_TRIALS` and
    /// `LAB_TOL_<NAME>`. Command-line values are applied afterwards and win.
    pub fn apply_env(&mut self) -> Result<()> {
        if let Some(q) = env_parse("LAB_CAP_QUBITS")? {
            self.caps.qubits = q;
        }
        if let Some(m) = env_parse("LAB_CAP_FKS_UNIVERSE")? {
            self.caps.fks_universe = m;
        }
        if let Some(t) = env_parse("LAB_TRIALS")? {
            self.trials = Some(t);
        }
        let t = &mut self.tolerances;
        for (key, slot) in [
            ("LAB_TOL_IDENTITY", &mut t.identity),
            ("LAB_TOL_ENTROPY", &mut t.entropy),
            ("LAB_TOL_ENCODING", &mut t.encoding),
            ("LAB_TOL_TRANSITION", &mut t.transition),
            ("LAB_TOL_CERTIFICATE", &mut t.certificate),
            ("LAB_TOL_AMPLITUDE", &mut t.amplitude),
        ] {
            if let Some(v) = env_parse(key)? {
                *slot = v;
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.caps.qubits == 0 || self.caps.qubits > MAX_QUBITS {
            bail!("qubit cap {} must lie in 1..={MAX_QUBITS}", self.caps.qubits);
        }
        if self.caps.fks_universe == 0 {
            bail!("the FKS universe cap must be positive");
        }
        if self.trials == Some(0) {
            bail!("trial count must be positive");
        }
        Ok(())
    }

    pub fn trials_or(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }
}

pub fn parse_u64_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<u64>().with_context(|| format!("bad list entry `{p}`")))
        .collect()
}
