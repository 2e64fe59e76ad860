//! JSON input files.
//!
//! Tables are nested arrays in the index order of the field name, e.g.
//! `p_yz_given_xs[x][s][y][z]` and `p_uvx_given_s[s][u][v][x]`. Unknown keys
//! are rejected everywhere.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::dmc::model::{AuxChannel, DmcScenario};
use crate::error::{Error, Result};
use crate::gauss::region::{AuxParams, ScenarioConfig};
use crate::sim::experiment::SimConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScenarioFile {
    Gaussian(ScenarioConfig),
    Dmc(DmcScenario),
}

impl ScenarioFile {
    pub fn validate(&self) -> Result<()> {
        match self {
            ScenarioFile::Gaussian(c) => c.validate(),
            ScenarioFile::Dmc(d) => d.validate(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ScenarioFile::Gaussian(_) => "gaussian",
            ScenarioFile::Dmc(_) => "dmc",
        }
    }
}

/// A DMC scenario, an auxiliary channel and one simulation configuration
/// run at each listed blocklength (`config.n` when the list is empty).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentFile {
    pub scenario: DmcScenario,
    pub aux: AuxChannel,
    #[serde(default)]
    pub config: SimConfig,
    #[serde(default)]
    pub blocklengths: Vec<usize>,
}

impl ExperimentFile {
    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        self.aux.validate(&self.scenario)?;
        self.config.validate()?;
        if let Some(k) = self.blocklengths.iter().position(|&n| n == 0) {
            return Err(Error::InvalidParameter(format!("blocklengths[{k}] must be at least 1")));
        }
        Ok(())
    }

    pub fn blocklengths(&self) -> Vec<usize> {
        if self.blocklengths.is_empty() {
            vec![self.config.n]
        } else {
            self.blocklengths.clone()
        }
    }
}

fn parse<T: DeserializeOwned>(text: &str, source_name: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidFile {
        source_name: source_name.to_string(),
        detail: e.to_string(),
    })
}

pub fn read_text(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidFile {
        source_name: path.display().to_string(),
        detail: e.to_string(),
    })
}

pub fn parse_scenario(text: &str, source_name: &str) -> Result<ScenarioFile> {
    let sc: ScenarioFile = parse(text, source_name)?;
    sc.validate()?;
    Ok(sc)
}

pub fn parse_params(text: &str, source_name: &str) -> Result<AuxParams> {
    let p: AuxParams = parse(text, source_name)?;
    let fields = [p.sigma_t2, p.sigma_f2, p.sigma_g2, p.delta, p.alpha, p.epsilon, p.gamma];
    if fields.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("{source_name}: parameters must be finite")));
    }
    Ok(p)
}

pub fn parse_aux(text: &str, source_name: &str, sc: &DmcScenario) -> Result<AuxChannel> {
    let aux: AuxChannel = parse(text, source_name)?;
    aux.validate(sc)?;
    Ok(aux)
}

pub fn parse_experiment(text: &str, source_name: &str) -> Result<ExperimentFile> {
    let e: ExperimentFile = parse(text, source_name)?;
    e.validate()?;
    Ok(e)
}
