use std::fmt;
use std::str::FromStr;

use pascal_charpoly::exact::ThetaValue;
use serde::{Deserialize, Serialize};

/// Inclusive range of system sizes, written `a..b` or `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LRange {
    pub start: usize,
    pub end: usize,
}

impl LRange {
    pub fn single(l: usize) -> Self {
        Self { start: l, end: l }
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<usize> {
        self.start..=self.end
    }
}

impl fmt::Display for LRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.start == self.end {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}..{}", self.start, self.end)
        }
    }
}

impl FromStr for LRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad L value {t:?}"));
        let (start, end) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let l = parse(s)?;
                (l, l)
            }
        };
        if start == 0 {
            return Err("L must be at least 1".into());
        }
        if end < start {
            return Err(format!("empty L range {s:?}"));
        }
        Ok(Self { start, end })
    }
}

/// Normalizes a theta argument: `P/Q` is reduced, decimals are kept as typed.
pub fn canonical_theta(s: &str) -> Result<String, String> {
    let value: ThetaValue = s.parse().map_err(|e| format!("{e}"))?;
    Ok(match value {
        ThetaValue::PiMultiple { .. } => value.to_string(),
        ThetaValue::Radians(_) => s.trim().to_string(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Charpoly,
    Eval,
    Compare,
    Special,
    Extract,
    Relate,
    Loops,
    Probabilities,
}

impl CommandKind {
    pub const ALL: [CommandKind; 8] = [
        CommandKind::Charpoly,
        CommandKind::Eval,
        CommandKind::Compare,
        CommandKind::Special,
        CommandKind::Extract,
        CommandKind::Relate,
        CommandKind::Loops,
        CommandKind::Probabilities,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Charpoly => "charpoly",
            CommandKind::Eval => "eval",
            CommandKind::Compare => "compare",
            CommandKind::Special => "special",
            CommandKind::Extract => "extract",
            CommandKind::Relate => "relate",
            CommandKind::Loops => "loops",
            CommandKind::Probabilities => "probabilities",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

pub const DEFAULT_DIGITS: u32 = 50;
pub const DEFAULT_N_MAX: u32 = 6;
pub const DEFAULT_K_MAX: usize = 7;
pub const DEFAULT_CACHE_DIR: &str = "./cache";

/// Everything that determines a command's output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandKind,
    #[serde(rename = "L")]
    pub l: Option<LRange>,
    pub theta: Option<String>,
    pub digits: u32,
    pub n_max: u32,
    pub k_max: usize,
    pub cache_dir: String,
    pub format: Format,
    pub order: Option<usize>,
    pub p: Option<i64>,
    pub mode: Option<String>,
    pub k_terms: Option<usize>,
    pub x: Option<String>,
    pub consts: Vec<String>,
}

impl RunConfig {
    pub fn new(command: CommandKind) -> Self {
        Self {
            command,
            l: None,
            theta: None,
            digits: DEFAULT_DIGITS,
            n_max: DEFAULT_N_MAX,
            k_max: DEFAULT_K_MAX,
            cache_dir: DEFAULT_CACHE_DIR.into(),
            format: Format::Json,
            order: None,
            p: None,
            mode: None,
            k_terms: None,
            x: None,
            consts: Vec::new(),
        }
    }

    /// Compact JSON with a fixed field order.
    pub fn canonical(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn from_canonical(s: &str) -> Result<Self, String> {
        serde_json::from_str(s).map_err(|e| e.to_string())
    }

    /// Command-line arguments (without the program name) that parse back
    /// to this configuration.
    pub fn to_args(&self) -> Vec<String> {
        let mut a = vec![self.command.name().to_string()];
        let mut push = |k: &str, v: String| {
            a.push(format!("--{k}"));
            a.push(v);
        };
        if let Some(l) = self.l {
            if self.command == CommandKind::Extract {
                push("Lmin", l.start.to_string());
                push("Lmax", l.end.to_string());
            } else {
                push("L", l.to_string());
            }
        }
        if let Some(t) = &self.theta {
            push("theta", t.clone());
        }
        push("digits", self.digits.to_string());
        push("n-max", self.n_max.to_string());
        push("k-max", self.k_max.to_string());
        push("cache-dir", self.cache_dir.clone());
        push("format", match self.format {
            Format::Json => "json".into(),
            Format::Csv => "csv".into(),
        });
        if let Some(o) = self.order {
            push("order", o.to_string());
        }
        if let Some(p) = self.p {
            push("p", p.to_string());
        }
        if let Some(m) = &self.mode {
            push("mode", m.clone());
        }
        if let Some(k) = self.k_terms {
            push("k-terms", k.to_string());
        }
        if let Some(x) = &self.x {
            push("x", x.clone());
        }
        for c in &self.consts {
            push("const", c.clone());
        }
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!("1..8".parse::<LRange>().unwrap(), LRange { start: 1, end: 8 });
        assert_eq!("4".parse::<LRange>().unwrap(), LRange::single(4));
        assert_eq!("2..=5".parse::<LRange>().unwrap(), LRange { start: 2, end: 5 });
        assert!("0".parse::<LRange>().is_err());
        assert!("5..2".parse::<LRange>().is_err());
    }

    #[test]
    fn theta_normalization() {
        assert_eq!(canonical_theta("2/6").unwrap(), "1/3");
        assert_eq!(canonical_theta(" 0.25 ").unwrap(), "0.25");
        assert!(canonical_theta("x").is_err());
    }
}
