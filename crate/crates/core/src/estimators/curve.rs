use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::RGrid;
use crate::geometry::EdgeCorrection;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Statistic {
    K,
    #[serde(rename = "pcf")]
    Pcf,
    #[serde(rename = "nn")]
    NearestNeighbour,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::K => "K",
            Statistic::Pcf => "pcf",
            Statistic::NearestNeighbour => "nn",
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "k" => Ok(Statistic::K),
            "pcf" | "g" => Ok(Statistic::Pcf),
            "nn" | "d" => Ok(Statistic::NearestNeighbour),
            other => Err(Error::Parse(format!("unknown statistic '{other}'"))),
        }
    }
}

/// A summary-statistic curve evaluated on an [`RGrid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveEstimate {
    pub grid: RGrid,
    pub values: Vec<f64>,
    pub statistic: Statistic,
    pub correction: EdgeCorrection,
    pub rho: f64,
    /// Window volume.
    pub n: f64,
}

impl CurveEstimate {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "# statistic={} correction={} rho={} n={}",
            self.statistic, self.correction, self.rho, self.n
        )?;
        writeln!(out, "r,value")?;
        for (r, v) in self.grid.values().iter().zip(&self.values) {
            writeln!(out, "{r},{v}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is ascii")
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut statistic = None;
        let mut correction = None;
        let mut rho = None;
        let mut n = None;
        let mut radii = Vec::new();
        let mut values = Vec::new();
        for line in input.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line == "r,value" {
                continue;
            }
            if let Some(header) = line.strip_prefix('#') {
                for token in header.split_whitespace() {
                    if let Some((k, v)) = token.split_once('=') {
                        match k {
                            "statistic" => statistic = Some(v.parse::<Statistic>()?),
                            "correction" => correction = Some(v.parse::<EdgeCorrection>()?),
                            "rho" => rho = Some(parse_f64(v)?),
                            "n" => n = Some(parse_f64(v)?),
                            _ => {}
                        }
                    }
                }
                continue;
            }
            let (r, v) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected 'r,value', got '{line}'")))?;
            radii.push(parse_f64(r)?);
            values.push(parse_f64(v)?);
        }
        let missing = |what: &str| Error::Parse(format!("curve header lacks {what}"));
        Ok(Self {
            grid: RGrid::from_values(radii)?,
            values,
            statistic: statistic.ok_or_else(|| missing("statistic"))?,
            correction: correction.ok_or_else(|| missing("correction"))?,
            rho: rho.ok_or_else(|| missing("rho"))?,
            n: n.ok_or_else(|| missing("n"))?,
        })
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("cannot parse number '{s}'")))
}
