//! Output records. Every integer is rendered as a decimal string so values of
//! any size survive a JSON round trip.

use std::fmt;
use std::io::Write;

use equifreq_core::chains::EquifreqChain;
use equifreq_core::conic::{chord_parameters, ConicSolution};
use equifreq_core::oracle::{AuditReport, Group};
use equifreq_core::pairs::{PairWitness, Quadruple, Transition};
use equifreq_core::physics::PhysicalLine;
use equifreq_core::ExactRational;
use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const TOOL: &str = "equifreq";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A non-negative integer serialized as a JSON string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dec(pub BigUint);

impl Serialize for Dec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Dec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
            return Err(serde::de::Error::custom(format!("not a decimal integer: {text:?}")));
        }
        text.parse().map(Dec).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Dec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<&BigUint> for Dec {
    fn from(n: &BigUint) -> Self {
        Dec(n.clone())
    }
}

impl From<usize> for Dec {
    fn from(n: usize) -> Self {
        Dec(BigUint::from(n))
    }
}

impl From<u32> for Dec {
    fn from(n: u32) -> Self {
        Dec(BigUint::from(n))
    }
}

/// Splits a positive rational into its decimal parts.
fn rational_parts(r: &ExactRational) -> (Dec, Dec) {
    (Dec(r.numer().magnitude().clone()), Dec(r.denom().magnitude().clone()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionRec {
    pub upper: Dec,
    pub lower: Dec,
}

impl From<&Transition> for TransitionRec {
    fn from(t: &Transition) -> Self {
        TransitionRec {
            upper: t.upper().into(),
            lower: t.lower().into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triple {
    pub x: Dec,
    pub y: Dec,
    pub z: Dec,
}

impl From<&ConicSolution> for Triple {
    fn from(s: &ConicSolution) -> Self {
        Triple {
            x: s.x().into(),
            y: s.y().into(),
            z: s.z().into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConicRecord {
    pub s: Dec,
    pub x: Dec,
    pub y: Dec,
    pub z: Dec,
    /// Reduced chord slope `q1/q2` of the primitive triple.
    pub q: String,
    pub l: Dec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadrupleRecord {
    pub n1: Dec,
    pub n2: Dec,
    pub n3: Dec,
    pub n4: Dec,
    pub delta_num: Dec,
    pub delta_den: Dec,
    pub trivial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub s: Dec,
    pub sol1: Triple,
    pub sol2: Triple,
    pub t1: Dec,
    pub t2: Dec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainRecord {
    pub members: Vec<TransitionRec>,
    pub delta_num: Dec,
    pub delta_den: Dec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_cap: Option<Dec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub delta_num: Dec,
    pub delta_den: Dec,
    pub members: Vec<TransitionRec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineRecord {
    pub upper: Dec,
    pub lower: Dec,
    pub delta_num: Dec,
    pub delta_den: Dec,
    pub profile: String,
    pub energy_ev: f64,
    pub frequency_hz: f64,
    pub wavelength_nm: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditFailureRec {
    pub n1: Dec,
    pub n2: Dec,
    pub n3: Dec,
    pub n4: Dec,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub bound: Dec,
    pub groups: Dec,
    pub pairs_checked: Dec,
    pub passed: bool,
    pub failures: Vec<AuditFailureRec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Record {
    Header { tool: String, version: String },
    ConicSolution(ConicRecord),
    Quadruple(QuadrupleRecord),
    Witness(WitnessRecord),
    Chain(ChainRecord),
    Group(GroupRecord),
    Line(LineRecord),
    Audit(AuditRecord),
}

impl Record {
    pub fn header() -> Self {
        Record::Header {
            tool: TOOL.into(),
            version: VERSION.into(),
        }
    }

    pub fn conic(sol: &ConicSolution) -> Self {
        let (q, l) = chord_parameters(sol).expect("valid solutions lie on a chord");
        Record::ConicSolution(ConicRecord {
            s: sol.s().into(),
            x: sol.x().into(),
            y: sol.y().into(),
            z: sol.z().into(),
            q: q.to_string(),
            l: Dec(l),
        })
    }

    pub fn quadruple(q: &Quadruple) -> Self {
        let [n1, n2, n3, n4] = q.levels();
        let (delta_num, delta_den) = rational_parts(q.delta());
        Record::Quadruple(QuadrupleRecord {
            n1: n1.into(),
            n2: n2.into(),
            n3: n3.into(),
            n4: n4.into(),
            delta_num,
            delta_den,
            trivial: q.is_trivial(),
        })
    }

    pub fn witness(w: &PairWitness) -> Self {
        Record::Witness(WitnessRecord {
            s: (&w.s).into(),
            sol1: (&w.sol1).into(),
            sol2: (&w.sol2).into(),
            t1: (&w.t1).into(),
            t2: (&w.t2).into(),
        })
    }

    pub fn chain(c: &EquifreqChain, delta_cap: Option<&BigUint>) -> Self {
        let (delta_num, delta_den) = rational_parts(c.delta());
        Record::Chain(ChainRecord {
            members: c.transitions().iter().map(Into::into).collect(),
            delta_num,
            delta_den,
            delta_cap: delta_cap.map(Into::into),
        })
    }

    pub fn group(g: &Group) -> Self {
        let (delta_num, delta_den) = rational_parts(&g.delta);
        Record::Group(GroupRecord {
            delta_num,
            delta_den,
            members: g.members.iter().map(Into::into).collect(),
        })
    }

    pub fn line(t: &Transition, line: &PhysicalLine) -> Self {
        let (delta_num, delta_den) = rational_parts(&line.delta_exact);
        Record::Line(LineRecord {
            upper: t.upper().into(),
            lower: t.lower().into(),
            delta_num,
            delta_den,
            profile: line.profile.name().into(),
            energy_ev: line.energy,
            frequency_hz: line.frequency,
            wavelength_nm: line.wavelength,
        })
    }

    pub fn audit(r: &AuditReport) -> Self {
        Record::Audit(AuditRecord {
            bound: r.bound.into(),
            groups: r.groups.into(),
            pairs_checked: r.pairs_checked.into(),
            passed: r.passed(),
            failures: r
                .failures
                .iter()
                .map(|f| AuditFailureRec {
                    n1: f.first.upper().into(),
                    n2: f.first.lower().into(),
                    n3: f.second.upper().into(),
                    n4: f.second.lower().into(),
                    reason: f.error.to_string(),
                })
                .collect(),
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Record::Header { .. } => "header",
            Record::ConicSolution(_) => "conic_solution",
            Record::Quadruple(_) => "quadruple",
            Record::Witness(_) => "witness",
            Record::Chain(_) => "chain",
            Record::Group(_) => "group",
            Record::Line(_) => "line",
            Record::Audit(_) => "audit",
        }
    }

    /// Flat CSV row: the kind followed by the fields in JSON order. Lists of
    /// transitions become `upper>lower` items joined by `;`.
    pub fn csv_row(&self) -> Vec<String> {
        let members = |m: &[TransitionRec]| m.iter().map(|t| format!("{}>{}", t.upper, t.lower)).collect::<Vec<_>>().join(";");
        let triple = |t: &Triple| format!("{};{};{}", t.x, t.y, t.z);
        let mut row = vec![self.kind().to_string()];
        let fields: Vec<String> = match self {
            Record::Header { tool, version } => vec![tool.clone(), version.clone()],
            Record::ConicSolution(c) => vec![
                c.s.to_string(),
                c.x.to_string(),
                c.y.to_string(),
                c.z.to_string(),
                c.q.clone(),
                c.l.to_string(),
            ],
            Record::Quadruple(q) => vec![
                q.n1.to_string(),
                q.n2.to_string(),
                q.n3.to_string(),
                q.n4.to_string(),
                q.delta_num.to_string(),
                q.delta_den.to_string(),
                q.trivial.to_string(),
            ],
            Record::Witness(w) => vec![
                w.s.to_string(),
                triple(&w.sol1),
                triple(&w.sol2),
                w.t1.to_string(),
                w.t2.to_string(),
            ],
            Record::Chain(c) => vec![
                members(&c.members),
                c.delta_num.to_string(),
                c.delta_den.to_string(),
                c.delta_cap.as_ref().map(ToString::to_string).unwrap_or_default(),
            ],
            Record::Group(g) => vec![g.delta_num.to_string(), g.delta_den.to_string(), members(&g.members)],
            Record::Line(l) => vec![
                l.upper.to_string(),
                l.lower.to_string(),
                l.delta_num.to_string(),
                l.delta_den.to_string(),
                l.profile.clone(),
                serde_json::to_string(&l.energy_ev).expect("finite"),
                serde_json::to_string(&l.frequency_hz).expect("finite"),
                serde_json::to_string(&l.wavelength_nm).expect("finite"),
            ],
            Record::Audit(a) => vec![
                a.bound.to_string(),
                a.groups.to_string(),
                a.pairs_checked.to_string(),
                a.passed.to_string(),
                a.failures
                    .iter()
                    .map(|f| format!("{}>{}|{}>{}|{}", f.n1, f.n2, f.n3, f.n4, f.reason))
                    .collect::<Vec<_>>()
                    .join(";"),
            ],
        };
        row.extend(fields);
        row
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Jsonl,
    Csv,
}

/// Streams records in the selected format.
pub struct Emitter<'a> {
    format: Format,
    out: &'a mut dyn Write,
}

impl<'a> Emitter<'a> {
    pub fn new(format: Format, out: &'a mut dyn Write) -> Self {
        Emitter { format, out }
    }

    pub fn emit(&mut self, record: &Record) -> std::io::Result<()> {
        match self.format {
            Format::Jsonl => {
                serde_json::to_writer(&mut *self.out, record)?;
                self.out.write_all(b"\n")
            }
            Format::Csv => {
                let mut w = csv::WriterBuilder::new()
                    .flexible(true)
                    .has_headers(false)
                    .from_writer(&mut *self.out);
                w.write_record(record.csv_row())?;
                w.flush()
            }
        }
    }
}
