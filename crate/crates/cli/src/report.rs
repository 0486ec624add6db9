//! Report sections and their two renderings.
//!
//! Text: each section opens with an upper-case header line, optionally
//! followed by a value on the same line; sections are separated by a blank
//! line. Key-value: one `key=value` record per line, the value running to
//! the end of the line.

use std::fmt::Write;

use moran::ortho::{DigitReport, Regime};
use moran::{Frequency, ZeroWitness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Kv,
}

pub enum Section {
    Regime {
        regime: Regime,
        reasons: Vec<String>,
    },
    GcdTable {
        rows: Vec<DigitReport>,
        exceptions: Vec<u64>,
    },
    Frequency(Frequency),
    Witnesses(Vec<ZeroWitness>),
    Zeros(Vec<Frequency>),
    Graph {
        vertices: usize,
        edges: usize,
    },
    Family(Vec<Frequency>),
    Counterexample(Frequency, Frequency),
    Verdict(String),
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn joined(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

pub fn render(sections: &[Section], format: Format) -> String {
    let mut out = String::new();
    for (i, s) in sections.iter().enumerate() {
        match format {
            Format::Text => {
                if i > 0 {
                    out.push('\n');
                }
                text(&mut out, s);
            }
            Format::Kv => kv(&mut out, s),
        }
    }
    out
}

fn text(out: &mut String, section: &Section) {
    match section {
        Section::Regime { regime, reasons } => {
            writeln!(out, "REGIME {regime}").unwrap();
            for r in reasons {
                writeln!(out, "reason: {r}").unwrap();
            }
        }
        Section::GcdTable { rows, exceptions } => {
            out.push_str("GCD-TABLE\n");
            out.push_str("digit gcd_p gcd_q preperiod tail level_two spectral_integer\n");
            for d in rows {
                writeln!(
                    out,
                    "{} {} {} {} {} {} {}",
                    d.digit,
                    d.gcd_p,
                    d.gcd_q,
                    yes_no(d.in_preperiod),
                    yes_no(d.in_tail),
                    yes_no(d.from_level_two),
                    yes_no(d.spectral_integer)
                )
                .unwrap();
            }
            if exceptions.is_empty() {
                out.push_str("exceptions: none\n");
            } else {
                writeln!(out, "exceptions: {}", joined(exceptions)).unwrap();
            }
        }
        Section::Frequency(f) => writeln!(out, "FREQUENCY {f}").unwrap(),
        Section::Witnesses(ws) => {
            writeln!(out, "WITNESSES {}", ws.len()).unwrap();
            for w in ws {
                writeln!(out, "{w}").unwrap();
            }
        }
        Section::Zeros(fs) => {
            writeln!(out, "ZEROS {}", fs.len()).unwrap();
            for f in fs {
                writeln!(out, "{f}").unwrap();
            }
        }
        Section::Graph { vertices, edges } => {
            writeln!(out, "GRAPH vertices={vertices} edges={edges}").unwrap();
        }
        Section::Family(fs) => {
            writeln!(out, "FAMILY {}", fs.len()).unwrap();
            for f in fs {
                writeln!(out, "{f}").unwrap();
            }
        }
        Section::Counterexample(a, b) => writeln!(out, "COUNTEREXAMPLE {a} {b}").unwrap(),
        Section::Verdict(v) => writeln!(out, "VERDICT {v}").unwrap(),
    }
}

fn kv(out: &mut String, section: &Section) {
    match section {
        Section::Regime { regime, reasons } => {
            writeln!(out, "regime={regime}").unwrap();
            for r in reasons {
                writeln!(out, "reason={r}").unwrap();
            }
        }
        Section::GcdTable { rows, exceptions } => {
            for d in rows {
                let n = d.digit;
                writeln!(out, "digit.{n}.gcd_p={}", d.gcd_p).unwrap();
                writeln!(out, "digit.{n}.gcd_q={}", d.gcd_q).unwrap();
                writeln!(out, "digit.{n}.preperiod={}", d.in_preperiod).unwrap();
                writeln!(out, "digit.{n}.tail={}", d.in_tail).unwrap();
                writeln!(out, "digit.{n}.level_two={}", d.from_level_two).unwrap();
                writeln!(out, "digit.{n}.spectral_integer={}", d.spectral_integer).unwrap();
            }
            writeln!(out, "exceptions={}", joined(exceptions)).unwrap();
        }
        Section::Frequency(f) => writeln!(out, "frequency={f}").unwrap(),
        Section::Witnesses(ws) => {
            writeln!(out, "witnesses.count={}", ws.len()).unwrap();
            for w in ws {
                writeln!(out, "witness={w}").unwrap();
            }
        }
        Section::Zeros(fs) => {
            writeln!(out, "zeros.count={}", fs.len()).unwrap();
            for f in fs {
                writeln!(out, "zero={f}").unwrap();
            }
        }
        Section::Graph { vertices, edges } => {
            writeln!(out, "graph.vertices={vertices}").unwrap();
            writeln!(out, "graph.edges={edges}").unwrap();
        }
        Section::Family(fs) => {
            writeln!(out, "family.size={}", fs.len()).unwrap();
            for f in fs {
                writeln!(out, "family.member={f}").unwrap();
            }
        }
        Section::Counterexample(a, b) => {
            writeln!(out, "counterexample.first={a}").unwrap();
            writeln!(out, "counterexample.second={b}").unwrap();
        }
        Section::Verdict(v) => writeln!(out, "verdict={v}").unwrap(),
    }
}
