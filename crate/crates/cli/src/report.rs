//! Report rendering: a text table, JSON lines or CSV.

use std::io::{self, Write};

use clap::ValueEnum;
use qcong::checks::{CheckResult, ParamValue};
use qcong::congruence::Valuation;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// One JSON line.
#[derive(Serialize)]
struct Record<'a> {
    check: &'a str,
    n: u64,
    power: u32,
    params: Map<String, Value>,
    holds: bool,
    valuation: Value,
    ms: f64,
}

pub struct Reporter<W: Write> {
    out: W,
    format: Format,
    no_timing: bool,
    wrote_header: bool,
}

fn params_json(r: &CheckResult) -> Map<String, Value> {
    r.params
        .iter()
        .map(|(k, v)| {
            let v = match v {
                ParamValue::Int(i) => Value::from(*i),
                ParamValue::Text(s) => Value::from(s.as_str()),
            };
            (k.to_string(), v)
        })
        .collect()
}

fn params_inline(r: &CheckResult, sep: &str) -> String {
    r.params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(sep)
}

impl<W: Write> Reporter<W> {
    pub fn new(out: W, format: Format, no_timing: bool) -> Self {
        Reporter {
            out,
            format,
            no_timing,
            wrote_header: false,
        }
    }

    fn ms(&self, r: &CheckResult) -> f64 {
        if self.no_timing {
            0.0
        } else {
            r.elapsed.as_secs_f64() * 1000.0
        }
    }

    pub fn record(&mut self, r: &CheckResult) -> io::Result<()> {
        match self.format {
            Format::Json => {
                let rec = Record {
                    check: r.id.name(),
                    n: r.n,
                    power: r.power,
                    params: params_json(r),
                    holds: r.holds,
                    valuation: match r.valuation {
                        Valuation::Finite(v) => Value::from(v),
                        Valuation::Infinite => Value::from("inf"),
                    },
                    ms: self.ms(r),
                };
                serde_json::to_writer(&mut self.out, &rec)?;
                writeln!(self.out)
            }
            Format::Csv => {
                if !self.wrote_header {
                    writeln!(self.out, "check,n,power,params,holds,valuation,ms")?;
                    self.wrote_header = true;
                }
                writeln!(
                    self.out,
                    "{},{},{},{},{},{},{:.3}",
                    r.id.name(),
                    r.n,
                    r.power,
                    params_inline(r, ";"),
                    r.holds,
                    r.valuation,
                    self.ms(r)
                )
            }
            Format::Text => {
                let mark = if r.holds { '✓' } else { '✗' };
                let bound = if r.valuation_is_lower_bound {
                    "≥"
                } else {
                    ""
                };
                let mut line = format!(
                    "{mark} {:<16} n={:<5} power={} valuation={bound}{}",
                    r.id.name(),
                    r.n,
                    r.power,
                    r.valuation
                );
                let params = params_inline(r, " ");
                if !params.is_empty() {
                    line.push_str(&format!("  [{params}]"));
                }
                if !self.no_timing {
                    line.push_str(&format!("  {:.1} ms", self.ms(r)));
                }
                if !r.detail.is_empty() {
                    line.push_str(&format!("  {}", r.detail));
                }
                writeln!(self.out, "{line}")
            }
        }
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.out.flush()
    }
}
