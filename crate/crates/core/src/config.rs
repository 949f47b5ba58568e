//! Run configuration read from a `key = value` text file.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sieve::{EngineConfig, DEFAULT_SEGMENT_SPAN, DEFAULT_STRIDE, DEFAULT_UNIVERSE_BOUND};

/// Environment variable naming the checkpoint cache file.
pub const CACHE_ENV: &str = "PIPFRACT_CACHE";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub universe_bound: u64,
    pub cache_path: Option<PathBuf>,
    pub segment_span: u64,
    pub checkpoint_stride: u64,
    pub output_dir: PathBuf,
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            universe_bound: DEFAULT_UNIVERSE_BOUND,
            cache_path: None,
            segment_span: DEFAULT_SEGMENT_SPAN,
            checkpoint_stride: DEFAULT_STRIDE,
            output_dir: PathBuf::from("."),
            threads: 1,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str, line: usize) -> Result<T> {
    // allow 32_000_000_000 style separators
    v.replace('_', "")
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("line {line}: bad value for {key}: {v:?}")))
}

impl RunConfig {
    /// Parse `key = value` lines. Blank lines and `#` comments are ignored;
    /// unknown keys are errors. Keys absent from the text keep their defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(Error::InvalidArgument(format!("line {line}: expected key = value")));
            };
            let (key, value) = (key.trim(), value.trim());
            match key {
                "universe_bound" => cfg.universe_bound = parse_num(key, value, line)?,
                "cache_path" => cfg.cache_path = Some(PathBuf::from(value)),
                "segment_span" => cfg.segment_span = parse_num(key, value, line)?,
                "checkpoint_stride" => cfg.checkpoint_stride = parse_num(key, value, line)?,
                "output_dir" => cfg.output_dir = PathBuf::from(value),
                "threads" => cfg.threads = parse_num(key, value, line)?,
                other => {
                    return Err(Error::InvalidArgument(format!("line {line}: unknown key {other:?}")))
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.universe_bound < 2 {
            return Err(Error::InvalidArgument("universe_bound must be at least 2".into()));
        }
        if self.threads == 0 {
            return Err(Error::InvalidArgument("threads must be at least 1".into()));
        }
        self.engine_config().validate()
    }

    pub fn engine_config(&self) -> EngineConfig {
        EngineConfig {
            universe_bound: self.universe_bound,
            segment_span: self.segment_span,
            checkpoint_stride: self.checkpoint_stride,
            threads: self.threads,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        assert_eq!(RunConfig::parse("").unwrap(), RunConfig::default());
        let cfg = RunConfig::parse(
            "# comment\nuniverse_bound = 1_000_000\ncache_path = /tmp/x.bin  # trailing\nthreads=2\n\noutput_dir = out\n",
        )
        .unwrap();
        assert_eq!(cfg.universe_bound, 1_000_000);
        assert_eq!(cfg.cache_path, Some(PathBuf::from("/tmp/x.bin")));
        assert_eq!(cfg.threads, 2);
        assert_eq!(cfg.output_dir, PathBuf::from("out"));
        assert_eq!(cfg.segment_span, DEFAULT_SEGMENT_SPAN);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RunConfig::parse("colour = red").is_err());
        assert!(RunConfig::parse("threads = many").is_err());
        assert!(RunConfig::parse("threads = 0").is_err());
        assert!(RunConfig::parse("universe_bound = 1").is_err());
        assert!(RunConfig::parse("just text").is_err());
    }
}
