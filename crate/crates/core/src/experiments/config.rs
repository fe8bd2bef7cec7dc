//! Experiment configuration in a flat `key = value` format.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::aggregation::TiePolicy;
use crate::splitting::{Splitter, RHO_RANGE};
use crate::{Error, Result};

/// Which hypothesis class and target the experiment draws from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Family {
    /// `{h_A : |A| <= d}` over `[domain_size]`, target `f*`. With
    /// `explicit` the class is enumerated, which certifies its Graph
    /// dimension by brute force and allows the canonical ERM.
    Cantor {
        d: usize,
        domain_size: u32,
        explicit: bool,
    },
    /// A seeded random explicit class; the target is row `target`.
    Random {
        points: u32,
        labels: usize,
        hyps: usize,
        target: usize,
    },
}

/// Marginal distribution over the domain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Marginal {
    Uniform,
    /// Mass of point `i` proportional to `ratio^(i-1)`.
    Geometric { ratio: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LearnerSpec {
    /// First consistent hypothesis in enumeration order (explicit classes).
    Canonical,
    /// The adversarial ERM on the Cantor class.
    Bad,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub family: Family,
    pub marginal: Marginal,
    pub learner: LearnerSpec,
    pub splitters: Vec<Splitter>,
    pub tie: TiePolicy,
    /// Error threshold used for the reported failure frequencies.
    pub epsilon: f64,
    /// Confidence parameter; also the default for the bagging count.
    pub delta: f64,
    pub m_grid: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Where reports go. Not part of the experiment's identity, so it is left
    /// out of serialised echoes: reports written to different directories
    /// stay byte-identical.
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Cantor instance over `[⌈d/(4ε)⌉]` with the adversarial ERM, uniform
    /// marginal and no splitting.
    pub fn cantor(d: usize, epsilon: f64) -> Result<Self> {
        let domain_size = crate::learners::CantorParams::from_epsilon(d, epsilon)?.domain_size;
        Ok(ExperimentConfig {
            family: Family::Cantor {
                d,
                domain_size,
                explicit: false,
            },
            marginal: Marginal::Uniform,
            learner: LearnerSpec::Bad,
            splitters: vec![Splitter::None],
            tie: TiePolicy::Idk,
            epsilon,
            delta: 0.05,
            m_grid: vec![1],
            trials: 1,
            seed: 0,
            out: None,
        })
    }

    /// Checks every invariant that [`parse`](Self::parse) enforces.
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::config("trials must be at least 1"));
        }
        if self.m_grid.is_empty() {
            return Err(Error::config("the m grid is empty"));
        }
        if self.m_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("the m grid must be strictly increasing"));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::config(format!("epsilon {} is outside (0, 1)", self.epsilon)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::config(format!("delta {} is outside (0, 1)", self.delta)));
        }
        if self.splitters.is_empty() {
            return Err(Error::config("at least one splitter is required"));
        }
        for s in &self.splitters {
            if let Splitter::Bagging { rho, delta } = s {
                if !(RHO_RANGE.0..=RHO_RANGE.1).contains(rho) {
                    return Err(Error::config(format!("rho {rho} is outside [0.02, 1]")));
                }
                if !(*delta > 0.0 && *delta < 1.0) {
                    return Err(Error::config(format!("bagging delta {delta} is outside (0, 1)")));
                }
            }
            if let Some(&m) = self.m_grid.iter().find(|&&m| m < s.min_length()) {
                return Err(Error::config(format!(
                    "splitter {} needs sequences of length at least {}, the grid contains {m}",
                    s.name(),
                    s.min_length()
                )));
            }
        }
        if let Marginal::Geometric { ratio } = self.marginal {
            if !(ratio > 0.0 && ratio <= 1.0) {
                return Err(Error::config(format!("geometric ratio {ratio} is outside (0, 1]")));
            }
        }
        match (self.family, self.learner) {
            (Family::Cantor { d, domain_size, .. }, _) => {
                if d == 0 || domain_size == 0 || d > domain_size as usize {
                    return Err(Error::config(format!(
                        "Cantor parameters need 1 <= d <= domain_size, got d={d}, domain_size={domain_size}"
                    )));
                }
            }
            (Family::Random { .. }, LearnerSpec::Bad) => {
                return Err(Error::config("learner=bad is only defined on the Cantor family"));
            }
            (Family::Random { points, labels, hyps, target }, LearnerSpec::Canonical) => {
                if points == 0 || labels == 0 || hyps == 0 {
                    return Err(Error::config("random classes need points, labels and hyps >= 1"));
                }
                if target >= hyps {
                    return Err(Error::config(format!("target {target} is not below hyps={hyps}")));
                }
            }
        }
        if let (Family::Cantor { explicit: false, .. }, LearnerSpec::Canonical) = (self.family, self.learner) {
            return Err(Error::config("learner=canonical needs an enumerated class (set explicit=true)"));
        }
        Ok(())
    }

    /// Parses the flat format. Unknown or repeated keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut kv = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::config(format!("line {}: expected `key = value`", i + 1)))?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if kv.insert(k.clone(), v).is_some() {
                return Err(Error::config(format!("line {}: key `{k}` repeated", i + 1)));
            }
        }
        let mut kv = Keys(kv);
        let config = Self::from_keys(&mut kv)?;
        if let Some(k) = kv.0.keys().next() {
            return Err(Error::config(format!("unknown key `{k}`")));
        }
        config.validate()?;
        Ok(config)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn from_keys(kv: &mut Keys) -> Result<Self> {
        let epsilon: f64 = kv.parse_or("epsilon", 0.05)?;
        let delta: f64 = kv.parse_or("delta", 0.05)?;
        let family = match kv.take("family").as_deref().unwrap_or("cantor") {
            "cantor" => {
                let d: usize = kv.parse_or("d", 3)?;
                let domain_size = match kv.take("domain_size") {
                    Some(v) => parse_value("domain_size", &v)?,
                    None if d == 0 => 0,
                    None => crate::learners::domain_size_for(d, epsilon),
                };
                Family::Cantor {
                    d,
                    domain_size,
                    explicit: kv.parse_or("explicit", false)?,
                }
            }
            "random" => Family::Random {
                points: kv.parse_or("points", 4)?,
                labels: kv.parse_or("labels", 3)?,
                hyps: kv.parse_or("hyps", 8)?,
                target: kv.parse_or("target", 0)?,
            },
            other => return Err(Error::config(format!("unknown family `{other}`"))),
        };
        let marginal = match kv.take("marginal") {
            None => Marginal::Uniform,
            Some(v) if v == "uniform" => Marginal::Uniform,
            Some(v) => match v.strip_prefix("geometric:") {
                Some(r) => Marginal::Geometric {
                    ratio: parse_value("marginal", r)?,
                },
                None => return Err(Error::config(format!("unknown marginal `{v}`"))),
            },
        };
        let default_learner = match family {
            Family::Cantor { .. } => LearnerSpec::Bad,
            Family::Random { .. } => LearnerSpec::Canonical,
        };
        let learner = match kv.take("learner").as_deref() {
            None => default_learner,
            Some("bad") => LearnerSpec::Bad,
            Some("canonical") => LearnerSpec::Canonical,
            Some(other) => return Err(Error::config(format!("unknown learner `{other}`"))),
        };
        let rho: f64 = kv.parse_or("rho", 0.5)?;
        let bagging_delta: f64 = kv.parse_or("bagging_delta", delta)?;
        let splitters = kv
            .take("splitters")
            .unwrap_or_else(|| "none".into())
            .split(',')
            .map(|s| match s.trim() {
                "none" => Ok(Splitter::None),
                "hanneke" => Ok(Splitter::Hanneke),
                "three" => Ok(Splitter::Three),
                "bagging" => Ok(Splitter::Bagging {
                    rho,
                    delta: bagging_delta,
                }),
                other => Err(Error::config(format!("unknown splitter `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let tie = match kv.take("tie").as_deref() {
            None | Some("idk") => TiePolicy::Idk,
            Some("first-voter") => TiePolicy::FirstVoter,
            Some("label-order") => TiePolicy::LabelOrder,
            Some(other) => return Err(Error::config(format!("unknown tie policy `{other}`"))),
        };
        let m_grid = kv
            .take("m")
            .ok_or_else(|| Error::config("missing key `m` (the m grid)"))?
            .split(',')
            .map(|v| parse_value("m", v.trim()))
            .collect::<Result<Vec<usize>>>()?;
        Ok(ExperimentConfig {
            family,
            marginal,
            learner,
            splitters,
            tie,
            epsilon,
            delta,
            m_grid,
            trials: kv.parse_or("trials", 100)?,
            seed: kv.parse_or("seed", 0)?,
            out: kv.take("out").map(PathBuf::from),
        })
    }

    /// Writes the configuration back in the flat format.
    pub fn to_flat(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        match self.family {
            Family::Cantor {
                d,
                domain_size,
                explicit,
            } => {
                put("family", "cantor".into());
                put("d", d.to_string());
                put("domain_size", domain_size.to_string());
                put("explicit", explicit.to_string());
            }
            Family::Random {
                points,
                labels,
                hyps,
                target,
            } => {
                put("family", "random".into());
                put("points", points.to_string());
                put("labels", labels.to_string());
                put("hyps", hyps.to_string());
                put("target", target.to_string());
            }
        }
        put(
            "marginal",
            match self.marginal {
                Marginal::Uniform => "uniform".into(),
                Marginal::Geometric { ratio } => format!("geometric:{ratio}"),
            },
        );
        put(
            "learner",
            match self.learner {
                LearnerSpec::Bad => "bad",
                LearnerSpec::Canonical => "canonical",
            }
            .into(),
        );
        put(
            "splitters",
            self.splitters.iter().map(|s| s.name()).collect::<Vec<_>>().join(","),
        );
        if let Some(Splitter::Bagging { rho, delta }) =
            self.splitters.iter().find(|s| matches!(s, Splitter::Bagging { .. }))
        {
            put("rho", rho.to_string());
            put("bagging_delta", delta.to_string());
        }
        put("tie", self.tie.name().into());
        put("epsilon", self.epsilon.to_string());
        put("delta", self.delta.to_string());
        put(
            "m",
            self.m_grid.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(","),
        );
        put("trials", self.trials.to_string());
        put("seed", self.seed.to_string());
        if let Some(out_path) = &self.out {
            put("out", out_path.display().to_string());
        }
        out
    }
}

struct Keys(BTreeMap<String, String>);

impl Keys {
    fn take(&mut self, key: &str) -> Option<String> {
        self.0.remove(key)
    }

    fn parse_or<T: std::str::FromStr>(&mut self, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        match self.take(key) {
            Some(v) => parse_value(key, &v),
            None => Ok(default),
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    v.parse()
        .map_err(|e| Error::config(format!("bad value `{v}` for `{key}`: {e}")))
}
