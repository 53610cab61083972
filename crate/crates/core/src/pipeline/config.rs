use std::path::{Path, PathBuf};

use crate::changes::DEFAULT_RADIUS;
use crate::classify::ClassifierSpec;
use crate::embedding::{TrainConfig, TrainMode};
use crate::walks::WalkConfig;

use super::{PipelineError, Stage};

/// Files for one epoch snapshot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpochPaths {
    pub o1: PathBuf,
    pub o2: PathBuf,
    pub alignment: PathBuf,
}

impl EpochPaths {
    /// `dir/epoch{t}/{o1.nt, o2.nt, alignment.tsv}`.
    pub fn in_data_dir(dir: &Path, t: usize) -> Self {
        let d = dir.join(format!("epoch{t}"));
        EpochPaths {
            o1: d.join("o1.nt"),
            o2: d.join("o2.nt"),
            alignment: d.join("alignment.tsv"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    /// Three consecutive snapshots: training changes come from the first
    /// transition, test changes from the second.
    pub epochs: Vec<EpochPaths>,
    pub walk: WalkConfig,
    pub train: TrainConfig,
    pub radius: usize,
    pub classifiers: Vec<ClassifierSpec>,
    pub out_dir: PathBuf,
    pub seed: u64,
}

pub const CONFIG_KEYS: [&str; 16] = [
    "seed",
    "dims",
    "walk_depth",
    "walks_per_entity",
    "include_literals",
    "window",
    "negatives",
    "embed_epochs",
    "learning_rate",
    "min_count",
    "radius",
    "classifier",
    "out",
    "deterministic",
    "data_dir",
    "epoch{t}.{o1,o2,alignment}",
];

fn config_err(msg: impl Into<String>) -> PipelineError {
    PipelineError::config(Stage::Config, msg)
}

/// Parses `key = value` lines; `#` starts a comment line.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>, PipelineError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| config_err(format!("config line {}: expected key = value", i + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Reads a config file, resolving relative paths against its directory.
pub fn read_config_file(path: &Path) -> Result<Vec<(String, String)>, PipelineError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new(""));
    let mut entries = parse_config_text(&text)?;
    for (k, v) in &mut entries {
        if k == "out" || k == "data_dir" || k.starts_with("epoch") {
            let p = Path::new(v.as_str());
            if p.is_relative() {
                *v = base.join(p).to_string_lossy().into_owned();
            }
        }
    }
    Ok(entries)
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, PipelineError>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| config_err(format!("{key}: cannot parse {value:?}: {e}")))
}

fn flag(key: &str, value: &str) -> Result<bool, PipelineError> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(config_err(format!(
            "{key}: expected a boolean, got {value:?}"
        ))),
    }
}

impl PipelineConfig {
    /// Builds a config from file entries and command-line overrides. Later
    /// entries win; `classifier` accumulates, and overriding classifiers
    /// replace the file's list entirely.
    pub fn from_entries(
        file: &[(String, String)],
        overrides: &[(String, String)],
    ) -> Result<Self, PipelineError> {
        let mut seed = 0u64;
        let mut walk = WalkConfig::default();
        let mut train = TrainConfig::default();
        let mut radius = DEFAULT_RADIUS;
        let mut out_dir = PathBuf::from("out");
        let mut deterministic = true;
        let mut data_dir: Option<PathBuf> = None;
        let mut explicit: Vec<[Option<PathBuf>; 3]> = Vec::new();

        let cli_classifiers = overrides.iter().any(|(k, _)| k == "classifier");
        let mut classifier_specs: Vec<&str> = Vec::new();

        for (source, entries) in [(false, file), (true, overrides)] {
            for (key, value) in entries {
                let (key, value) = (key.as_str(), value.as_str());
                match key {
                    "seed" => seed = num(key, value)?,
                    "dims" => train.dimensions = num(key, value)?,
                    "walk_depth" => walk.depth = num(key, value)?,
                    "walks_per_entity" => walk.walks_per_entity = num(key, value)?,
                    "include_literals" => walk.include_literals = flag(key, value)?,
                    "window" => train.window = num(key, value)?,
                    "negatives" => train.negatives = num(key, value)?,
                    "embed_epochs" => train.epochs = num(key, value)?,
                    "learning_rate" => train.initial_learning_rate = num(key, value)?,
                    "min_count" => train.min_count = num(key, value)?,
                    "radius" => radius = num(key, value)?,
                    "out" => out_dir = PathBuf::from(value),
                    "deterministic" => deterministic = flag(key, value)?,
                    "data_dir" => data_dir = Some(PathBuf::from(value)),
                    "classifier" => {
                        if source == cli_classifiers {
                            classifier_specs.push(value);
                        }
                    }
                    _ => {
                        let (epoch, part) = key
                            .strip_prefix("epoch")
                            .and_then(|rest| rest.split_once('.'))
                            .ok_or_else(|| config_err(format!("unknown config key {key:?}")))?;
                        let t: usize = num(key, epoch)?;
                        let slot = match part {
                            "o1" => 0,
                            "o2" => 1,
                            "alignment" => 2,
                            _ => return Err(config_err(format!("unknown config key {key:?}"))),
                        };
                        if explicit.len() <= t {
                            explicit.resize(t + 1, Default::default());
                        }
                        explicit[t][slot] = Some(PathBuf::from(value));
                    }
                }
            }
        }

        walk.seed = seed;
        train.seed = seed;
        train.mode = if deterministic {
            TrainMode::Sequential
        } else {
            TrainMode::Parallel
        };

        let mut epochs = Vec::new();
        for t in 0..explicit.len().max(3) {
            let fallback = data_dir.as_deref().map(|d| EpochPaths::in_data_dir(d, t));
            let given = explicit.get(t).cloned().unwrap_or_default();
            let pick = |slot: usize, name: &str, f: Option<&PathBuf>| {
                given[slot].clone().or_else(|| f.cloned()).ok_or_else(|| {
                    config_err(format!(
                        "no path for epoch{t}.{name}; set data_dir or epoch{t}.{name}"
                    ))
                })
            };
            epochs.push(EpochPaths {
                o1: pick(0, "o1", fallback.as_ref().map(|f| &f.o1))?,
                o2: pick(1, "o2", fallback.as_ref().map(|f| &f.o2))?,
                alignment: pick(2, "alignment", fallback.as_ref().map(|f| &f.alignment))?,
            });
        }
        if epochs.len() != 3 {
            return Err(config_err(format!(
                "expected 3 epochs, got {}",
                epochs.len()
            )));
        }

        let classifiers = if classifier_specs.is_empty() {
            ClassifierSpec::roster(seed)
        } else {
            classifier_specs
                .iter()
                .map(|s| ClassifierSpec::parse(s, seed).map_err(|e| config_err(e.to_string())))
                .collect::<Result<_, _>>()?
        };

        let cfg = PipelineConfig {
            epochs,
            walk,
            train,
            radius,
            classifiers,
            out_dir,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        self.walk
            .validate()
            .map_err(|e| config_err(e.to_string()))?;
        self.train
            .validate()
            .map_err(|e| config_err(e.to_string()))?;
        if self.classifiers.is_empty() {
            return Err(config_err("at least one classifier is required"));
        }
        for c in &self.classifiers {
            c.validate().map_err(|e| config_err(e.to_string()))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entries(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    #[test]
    fn defaults_and_data_dir_layout() {
        let cfg = PipelineConfig::from_entries(&entries(&[("data_dir", "d")]), &[]).unwrap();
        assert_eq!(cfg.train.dimensions, 500);
        assert_eq!(cfg.walk.depth, 8);
        assert_eq!(cfg.radius, 2);
        assert_eq!(cfg.classifiers.len(), 8);
        assert_eq!(cfg.train.mode, TrainMode::Sequential);
        assert_eq!(cfg.epochs[2].o2, Path::new("d/epoch2/o2.nt"));
    }

    #[test]
    fn flags_override_file() {
        let file = entries(&[
            ("data_dir", "d"),
            ("seed", "1"),
            ("dims", "64"),
            ("classifier", "knn"),
            ("classifier", "lr"),
            ("epoch1.o2", "other.nt"),
        ]);
        let cfg = PipelineConfig::from_entries(&file, &[]).unwrap();
        assert_eq!(cfg.classifiers.len(), 2);
        assert_eq!(cfg.epochs[1].o2, Path::new("other.nt"));
        let cli = entries(&[
            ("seed", "9"),
            ("classifier", "mlp:layers=8"),
            ("deterministic", "false"),
        ]);
        let cfg = PipelineConfig::from_entries(&file, &cli).unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.walk.seed, 9);
        assert_eq!(cfg.train.dimensions, 64);
        assert_eq!(cfg.classifiers.len(), 1);
        assert_eq!(cfg.classifiers[0].seed, 9);
        assert_eq!(cfg.train.mode, TrainMode::Parallel);
    }

    #[test]
    fn config_errors() {
        for bad in [
            vec![("data_dir", "d"), ("nope", "1")],
            vec![("data_dir", "d"), ("dims", "x")],
            vec![("data_dir", "d"), ("dims", "0")],
            vec![("data_dir", "d"), ("classifier", "zzz")],
            vec![("epoch0.o1", "a")],
        ] {
            let err = PipelineConfig::from_entries(&entries(&bad), &[]).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{bad:?}");
        }
        assert!(parse_config_text("just words").is_err());
        assert_eq!(
            parse_config_text("# c\n\n a = b \n").unwrap(),
            entries(&[("a", "b")])
        );
    }
}
