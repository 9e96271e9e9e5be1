use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lift::LiftParams;

/// Environment variable overriding [`RunConfig::terms`].
pub const ENV_TERMS: &str = "MAASS_TERMS";
/// Environment variable overriding [`RunConfig::float_bits`].
pub const ENV_FLOAT_BITS: &str = "MAASS_FLOAT_BITS";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Self::Text),
            "json" => Ok(Self::Json),
            _ => Err(Error::parse(format!("unknown output format {s:?} (text or json)"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Text => "text",
            Self::Json => "json",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub terms: usize,
    pub float_bits: usize,
    pub divisor_exponent: u32,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            terms: 60,
            float_bits: 256,
            divisor_exponent: 2,
            output_format: OutputFormat::Text,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.terms < 8 {
            return Err(Error::domain(format!("terms must be at least 8, got {}", self.terms)));
        }
        if self.float_bits < 64 {
            return Err(Error::domain(format!("floatBits must be at least 64, got {}", self.float_bits)));
        }
        Ok(())
    }

    /// Applies `MAASS_TERMS` / `MAASS_FLOAT_BITS` from `lookup`.
    pub fn with_env(mut self, lookup: impl Fn(&str) -> Option<String>) -> Result<Self> {
        let read = |key: &str| -> Result<Option<usize>> {
            lookup(key)
                .map(|v| v.trim().parse().map_err(|_| Error::parse(format!("{key}={v:?} is not a number"))))
                .transpose()
        };
        if let Some(t) = read(ENV_TERMS)? {
            self.terms = t;
        }
        if let Some(b) = read(ENV_FLOAT_BITS)? {
            self.float_bits = b;
        }
        Ok(self)
    }

    pub fn lift_params(&self) -> LiftParams {
        LiftParams {
            divisor_exponent: self.divisor_exponent,
            float_bits: self.float_bits,
            ..LiftParams::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_bounds() {
        let c = RunConfig::default();
        c.validate().unwrap();
        assert_eq!((c.terms, c.float_bits, c.divisor_exponent), (60, 256, 2));
        assert!(RunConfig { terms: 7, ..c.clone() }.validate().is_err());
        assert!(RunConfig { float_bits: 32, ..c }.validate().is_err());
    }

    #[test]
    fn environment_overrides() {
        let env = |k: &str| match k {
            ENV_TERMS => Some("100".to_string()),
            _ => None,
        };
        let c = RunConfig::default().with_env(env).unwrap();
        assert_eq!((c.terms, c.float_bits), (100, 256));
        let bad = RunConfig::default().with_env(|_| Some("many".into()));
        assert!(matches!(bad, Err(Error::Parse(_))));
        assert_eq!("json".parse::<OutputFormat>().unwrap(), OutputFormat::Json);
        assert!("xml".parse::<OutputFormat>().is_err());
    }
}
