//! Rendering of reports as json, csv or LaTeX tables.

use std::fmt::Write;

use clap::ValueEnum;
use gkf_core::coboundary::WeightReport;
use gkf_core::complex::{CochainVector, TypeBasis};
use gkf_core::DimsRow;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Tex,
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(sep)
}

#[derive(Serialize)]
struct DimsReport<'a> {
    schema: &'static str,
    rows: &'a [DimsRow],
}

pub fn dims(rows: &[DimsRow], format: Format) -> String {
    let width = rows.iter().map(|r| r.dims.len()).max().unwrap_or(0);
    let degrees: Vec<usize> = (1..=width).collect();
    let padded = |r: &DimsRow| -> Vec<String> {
        (0..width)
            .map(|i| r.dims.get(i).map(ToString::to_string).unwrap_or_default())
            .collect()
    };
    match format {
        Format::Json => json(&DimsReport {
            schema: "gkf-dims/1",
            rows,
        }),
        Format::Csv => {
            let mut s = format!("w,{},chi\n", join(&degrees, ","));
            for r in rows {
                writeln!(s, "{},{},{}", r.w, padded(r).join(","), r.euler).unwrap();
            }
            s
        }
        Format::Tex => {
            let mut s = format!("\\begin{{tabular}}{{|r|*{{{width}}}{{r}}|c|}}\n\\hline\n");
            writeln!(s, "$w$ & {} & $\\chi$ \\\\\\hline", join(&degrees, " & ")).unwrap();
            for r in rows {
                writeln!(
                    s,
                    "{} & {} & ${}$ \\\\\\hline",
                    r.w,
                    padded(r).join(" & "),
                    r.euler
                )
                .unwrap();
            }
            s.push_str("\\end{tabular}\n");
            s
        }
    }
}

#[derive(Serialize)]
struct BettiReport<'a> {
    schema: &'static str,
    #[serde(flatten)]
    report: &'a WeightReport,
}

pub fn betti(r: &WeightReport, format: Format) -> String {
    let degrees: Vec<usize> = (1..=r.dims.len()).collect();
    let lines = [("dim", &r.dims), ("rank", &r.ranks), ("betti", &r.betti)];
    match format {
        Format::Json => json(&BettiReport {
            schema: "gkf-betti/1",
            report: r,
        }),
        Format::Csv => {
            let mut s = format!("w,quantity,{}\n", join(&degrees, ","));
            for (name, xs) in lines {
                writeln!(s, "{},{name},{}", r.w, join(xs, ",")).unwrap();
            }
            writeln!(s, "{},chi,{}", r.w, r.euler).unwrap();
            s
        }
        Format::Tex => {
            let n = degrees.len();
            let mut s = format!("\\begin{{tabular}}[t]{{|c|c|*{{{n}}}{{r}}|}}\n\\hline\n");
            writeln!(s, "weight & degree & {} \\\\\\hline", join(&degrees, "& ")).unwrap();
            let labels = ["$\\dim$", "$\\rank(d)$", "Betti \\#"];
            for (i, ((_, xs), label)) in lines.iter().zip(labels).enumerate() {
                let w = if i == 0 {
                    r.w.to_string()
                } else {
                    String::new()
                };
                writeln!(s, "{w} & {label} & {} \\\\", join(xs, "& ")).unwrap();
            }
            s.push_str("\\hline\n\\end{tabular}\n");
            writeln!(s, "% chi = {}", r.euler).unwrap();
            s
        }
    }
}

#[derive(Serialize)]
struct CountEntry {
    r#type: String,
    count: usize,
}

#[derive(Serialize)]
struct CountReport {
    schema: &'static str,
    w: u32,
    m: u32,
    counts: Vec<CountEntry>,
    total: usize,
}

pub fn basis_counts(w: u32, m: u32, bases: &[TypeBasis], format: Format) -> String {
    let total = bases.iter().map(|b| b.vectors.len()).sum();
    match format {
        Format::Json => json(&CountReport {
            schema: "gkf-basis-counts/1",
            w,
            m,
            counts: bases
                .iter()
                .map(|b| CountEntry {
                    r#type: b.signature.to_string(),
                    count: b.vectors.len(),
                })
                .collect(),
            total,
        }),
        Format::Csv => {
            let mut s = String::from("type,count\n");
            for b in bases {
                writeln!(s, "{},{}", b.signature, b.vectors.len()).unwrap();
            }
            writeln!(s, "total,{total}").unwrap();
            s
        }
        Format::Tex => {
            let mut s =
                String::from("\\begin{tabular}[t]{|c|c|}\n\\hline\ntype & dim \\\\\\hline\n");
            for b in bases {
                writeln!(
                    s,
                    "$({})$ & {} \\\\",
                    tex_type(&b.signature.to_string()),
                    b.vectors.len()
                )
                .unwrap();
            }
            writeln!(s, "\\hline\ntotal & {total} \\\\\\hline\n\\end{{tabular}}").unwrap();
            s
        }
    }
}

fn tex_type(t: &str) -> String {
    t.split(' ')
        .map(|p| match p.split_once('^') {
            Some((l, k)) => format!("{l}^{{{k}}}"),
            None => p.to_string(),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Serialize)]
struct VectorEntry {
    r#type: String,
    index: usize,
    terms: Vec<(String, String)>,
}

#[derive(Serialize)]
struct BasisReport {
    schema: &'static str,
    w: u32,
    m: u32,
    vectors: Vec<VectorEntry>,
}

fn tex_vector(v: &CochainVector) -> String {
    let mut s = String::new();
    for (i, (mono, c)) in v.terms().enumerate() {
        let coeff = if c.is_integer() {
            c.numer().to_string()
        } else {
            format!("\\tfrac{{{}}}{{{}}}", c.numer(), c.denom())
        };
        if i > 0 && !c.is_negative() {
            s.push_str(" + ");
        } else if i > 0 {
            s.push(' ');
        }
        let factors: Vec<String> = mono
            .factors()
            .iter()
            .map(|g| format!("\\bar z_{{{}}}^{{{}}}", g.r(), g.big_r()))
            .collect();
        write!(s, "{coeff}\\, {}", factors.join("\\wedge ")).unwrap();
    }
    s
}

/// Full listing of the invariant bases. The json and csv forms carry every
/// coefficient; the default text form is the cache serialization.
pub fn basis_vectors(w: u32, m: u32, bases: &[TypeBasis], format: Format) -> String {
    let flat = bases
        .iter()
        .flat_map(|b| b.vectors.iter().enumerate().map(move |(i, v)| (b, i, v)));
    match format {
        Format::Json => json(&BasisReport {
            schema: "gkf-basis/1",
            w,
            m,
            vectors: flat
                .map(|(b, i, v)| VectorEntry {
                    r#type: b.signature.to_string(),
                    index: i,
                    terms: v
                        .terms()
                        .map(|(mono, c)| (c.to_string(), mono.to_string()))
                        .collect(),
                })
                .collect(),
        }),
        Format::Csv => {
            let mut s = String::from("type,index,coefficient,monomial\n");
            for (b, i, v) in flat {
                for (mono, c) in v.terms() {
                    writeln!(s, "{},{i},{c},{mono}", b.signature).unwrap();
                }
            }
            s
        }
        Format::Tex => {
            let mut s = String::new();
            for (b, i, v) in flat {
                writeln!(s, "% ({}) #{i}\n\\[ {} \\]", b.signature, tex_vector(v)).unwrap();
            }
            s
        }
    }
}

/// Plain listing: a `# (type): count` header per type followed by the vectors
/// in the cache text format, blank line between vectors.
pub fn basis_text(bases: &[TypeBasis]) -> String {
    let mut s = String::new();
    for b in bases {
        writeln!(s, "# ({}): {}", b.signature, b.vectors.len()).unwrap();
        for v in &b.vectors {
            s.push_str(&v.to_text());
            s.push('\n');
        }
    }
    s
}

#[derive(Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    schema: &'static str,
    passed: bool,
    checks: &'a [CheckOutcome],
}

pub fn verify(checks: &[CheckOutcome], format: Option<Format>) -> String {
    let passed = checks.iter().all(|c| c.passed);
    match format {
        Some(Format::Json) => json(&VerifyReport {
            schema: "gkf-verify/1",
            passed,
            checks,
        }),
        Some(Format::Csv) => {
            let mut s = String::from("check,status,detail\n");
            for c in checks {
                let status = if c.passed { "pass" } else { "fail" };
                writeln!(s, "{},{status},\"{}\"", c.name, c.detail.replace('"', "'")).unwrap();
            }
            s
        }
        Some(Format::Tex) | None => {
            let mut s = String::new();
            for c in checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                writeln!(s, "{status} {}: {}", c.name, c.detail).unwrap();
            }
            s
        }
    }
}
