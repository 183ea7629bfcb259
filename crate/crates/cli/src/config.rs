//! Run configuration: quadrature budgets, caps, switching and state
//! parameters, read from a JSON file with environment overrides for the
//! node counts only.

use num_complex::Complex64;
use serde::Deserialize;

use csmx_core::algebra::Mass;
use csmx_core::propagators::{QuadratureConfig, TestFunction};
use csmx_core::smatrix::{StateSpec, SwitchingFunction};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianSpec {
    #[serde(default = "one_complex")]
    pub amp: [f64; 2],
    pub center: [f64; 4],
    pub widths: [f64; 4],
}

fn one_complex() -> [f64; 2] {
    [1.0, 0.0]
}

impl GaussianSpec {
    pub fn build(&self) -> Result<TestFunction, String> {
        TestFunction::new(Complex64::new(self.amp[0], self.amp[1]), self.center, self.widths)
            .map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwitchingSpec {
    #[serde(default = "one_complex")]
    pub amp: [f64; 2],
    pub gx: GaussianSpec,
    pub gy: GaussianSpec,
    pub gz: GaussianSpec,
}

impl SwitchingSpec {
    pub fn build(&self) -> Result<SwitchingFunction, String> {
        Ok(SwitchingFunction::new(
            Complex64::new(self.amp[0], self.amp[1]),
            self.gx.build()?,
            self.gy.build()?,
            self.gz.build()?,
        ))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorSpec {
    pub component: u8,
    pub weight: GaussianSpec,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpecConfig {
    #[serde(default)]
    pub bars: Vec<FactorSpec>,
    #[serde(default)]
    pub psis: Vec<FactorSpec>,
    #[serde(default)]
    pub photons: Vec<FactorSpec>,
}

impl StateSpecConfig {
    pub fn build(&self) -> Result<StateSpec, String> {
        let conv = |v: &[FactorSpec]| -> Result<Vec<(u8, TestFunction)>, String> {
            v.iter().map(|f| Ok((f.component, f.weight.build()?))).collect()
        };
        Ok(StateSpec {
            bars: conv(&self.bars)?,
            psis: conv(&self.psis)?,
            photons: conv(&self.photons)?,
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub quadrature: QuadratureConfig,
    pub order_cap: usize,
    /// Mass as an exact rational `[numerator, denominator]`.
    pub mass: [i64; 2],
    /// Coupling strength as an exact rational.
    pub charge: [i64; 2],
    pub switching: Option<SwitchingSpec>,
    pub switching_late: Option<SwitchingSpec>,
    pub bra: Option<StateSpecConfig>,
    pub ket: Option<StateSpecConfig>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            quadrature: QuadratureConfig::default(),
            order_cap: csmx_core::smatrix::DEFAULT_ORDER_CAP,
            mass: [1, 1],
            charge: [1, 1],
            switching: None,
            switching_late: None,
            bra: None,
            ket: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&str>) -> Result<Self, String> {
        let mut cfg: RunConfig = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| format!("{p}: {e}"))?;
                serde_json::from_str(&text).map_err(|e| format!("{p}: {e}"))?
            }
            None => RunConfig::default(),
        };
        cfg.apply_env_overrides();
        Ok(cfg)
    }

    /// Environment overrides are limited to the quadrature node counts.
    fn apply_env_overrides(&mut self) {
        let read = |name: &str| std::env::var(name).ok().and_then(|v| v.parse::<usize>().ok());
        if let Some(n) = read("CSMX_RADIAL_NODES") {
            self.quadrature.radial_nodes = n;
        }
        if let Some(n) = read("CSMX_POLAR_NODES") {
            self.quadrature.polar_nodes = n;
        }
        if let Some(n) = read("CSMX_AZIMUTH_NODES") {
            self.quadrature.azimuth_nodes = n;
        }
        if let Some(n) = read("CSMX_TIME_NODES") {
            self.quadrature.time_nodes = n;
        }
        if let Some(n) = read("CSMX_P0_NODES") {
            self.quadrature.p0_nodes = n;
        }
    }

    pub fn mass(&self) -> Mass {
        Mass::new(self.mass[0], self.mass[1])
    }

    pub fn charge(&self) -> csmx_core::algebra::Coeff {
        csmx_core::algebra::coeff::ratio(self.charge[0], self.charge[1])
    }
}
