use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::parse::parse_monomial;
use crate::ring::{CoeffRing, RingDescriptor};
use crate::socle::{WindowPolicy, DEFAULT_DEGREE_CAP};
use crate::toplc::HypersurfaceF;

const HARTSHORNE: &str = include_str!("../../presets/hartshorne.toml");
const EXAMPLE12: &str = include_str!("../../presets/example12.toml");

pub const PRESET_NAMES: &[&str] = &["hartshorne", "example12"];

/// The TOML text of a built-in preset.
pub fn preset_source(name: &str) -> Result<&'static str> {
    match name {
        "hartshorne" => Ok(HARTSHORNE),
        "example12" => Ok(EXAMPLE12),
        other => Err(Error::Config(format!("unknown preset `{other}` (known: {})", PRESET_NAMES.join(", ")))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackendName {
    #[serde(alias = "full-polynomial")]
    Polynomial,
    Semigroup,
}

/// Scenario as written in a config file or assembled from flags. Every key is
/// optional here so that flags can be layered over a file.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub name: Option<String>,
    pub characteristic: Option<u64>,
    pub backend: Option<BackendName>,
    pub uvars: Option<Vec<String>>,
    pub generators: Option<Vec<String>>,
    pub xvars: Option<Vec<String>>,
    pub weights: Option<Vec<u32>>,
    pub f: Option<String>,
    pub ell: Option<[u32; 2]>,
    pub q: Option<[u32; 2]>,
    pub deg_cap: Option<i64>,
}

/// An explicit range of `ell`, or of `q` with `ell = q * p + n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EllRange {
    Ell(u32, u32),
    Q(u32, u32),
}

impl ScenarioSpec {
    pub fn from_toml(src: &str) -> Result<Self> {
        toml::from_str(src).map_err(|e| Error::Config(e.message().to_string()))
    }

    pub fn preset(name: &str) -> Result<Self> {
        Self::from_toml(preset_source(name)?)
    }

    /// Keys set in `other` replace the ones here.
    pub fn overlay(mut self, other: ScenarioSpec) -> Self {
        macro_rules! take {
            ($($k:ident),*) => { $( if other.$k.is_some() { self.$k = other.$k; } )* };
        }
        take!(name, characteristic, backend, uvars, generators, xvars, weights, f, deg_cap);
        // a range given in one form replaces a range given in the other
        if other.ell.is_some() || other.q.is_some() {
            self.ell = other.ell;
            self.q = other.q;
        }
        self
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic.unwrap_or(crate::field::DEFAULT_CHARACTERISTIC)
    }

    pub fn descriptor(&self) -> Result<RingDescriptor> {
        let uvars = self.uvars.clone().ok_or_else(|| Error::Config("missing `uvars`".into()))?;
        let xvars = self.xvars.clone().ok_or_else(|| Error::Config("missing `xvars`".into()))?;
        let backend = self.backend.unwrap_or(BackendName::Polynomial);
        let u: Vec<&str> = uvars.iter().map(String::as_str).collect();
        let x: Vec<&str> = xvars.iter().map(String::as_str).collect();
        let ch = self.characteristic();
        let mut desc = match backend {
            BackendName::Polynomial => {
                if self.generators.is_some() {
                    return Err(Error::Config("`generators` only applies to the semigroup backend".into()));
                }
                RingDescriptor::polynomial(ch, &u, &x)
            }
            BackendName::Semigroup => {
                let gens = self.generators.as_ref().ok_or_else(|| Error::Config("semigroup backend needs `generators`".into()))?;
                let q = crate::field::RationalField;
                let monos = gens
                    .iter()
                    .map(|g| parse_monomial(g, &uvars, &q).map_err(|e| Error::Config(format!("generator `{g}`: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                RingDescriptor::semigroup(ch, &u, monos, &x)
            }
        };
        if let Some(w) = &self.weights {
            desc = desc.with_weights(w.clone());
        }
        desc.validate()?;
        Ok(desc)
    }

    pub fn range(&self) -> Result<Option<EllRange>> {
        match (self.ell, self.q) {
            (Some(_), Some(_)) => Err(Error::Config("give either `ell` or `q`, not both".into())),
            (Some([a, b]), None) => Ok(Some(EllRange::Ell(a, b))),
            (None, Some([a, b])) => Ok(Some(EllRange::Q(a, b))),
            (None, None) => Ok(None),
        }
    }

    pub fn build<F: Field>(&self, field: F) -> Result<Scenario<F>> {
        let desc = self.descriptor()?;
        let range = self.range()?;
        let deg_cap = self.deg_cap.unwrap_or(DEFAULT_DEGREE_CAP);
        if deg_cap < 1 {
            return Err(Error::Config("`deg_cap` must be positive".into()));
        }
        let ring = CoeffRing::new(desc, field)?;
        let src = self.f.as_ref().ok_or_else(|| Error::Config("missing `f`".into()))?;
        let f = HypersurfaceF::parse(src, &ring)?;
        f.grading(&ring)?;
        let n = ring.n() as u32;
        let ells = match range.unwrap_or(EllRange::Ell(n, n + 10)) {
            EllRange::Ell(a, b) => (a..=b).collect(),
            EllRange::Q(a, b) => (a..=b).map(|q| q * f.p() + n).collect(),
        };
        Ok(Scenario { name: self.name.clone(), ring, f, ells, policy: WindowPolicy::with_cap(deg_cap) })
    }
}

/// A validated scenario over a concrete field.
#[derive(Debug)]
pub struct Scenario<F: Field> {
    pub name: Option<String>,
    pub ring: CoeffRing<F>,
    pub f: HypersurfaceF<F::Elem>,
    pub ells: Vec<u32>,
    pub policy: WindowPolicy,
}

impl<F: Field> Scenario<F> {
    /// Cap for the cap-bounded ideal checks: `max(24, 3 * sum of generator
    /// degrees)`, never above the degree cap.
    pub fn ideal_cap(&self) -> u32 {
        let sum: u32 = self.f.coefficients().filter_map(|c| c.homogeneous_degree()).sum();
        let cap = 24.max(3 * sum) as i64;
        cap.min(self.policy.hard_cap).max(1) as u32
    }
}
