use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::enclosure::Interval;
use crate::exact::{Polynomial, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    PassWithErrata,
    Inconclusive,
    Fail,
}

impl Verdict {
    /// Process exit status for the CLI.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass | Verdict::PassWithErrata => 0,
            Verdict::Fail => 2,
            Verdict::Inconclusive => 3,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::PassWithErrata => "pass-with-errata",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessStatus {
    /// The claim holds with interval separation.
    Holds,
    /// Documented equality case: enclosures overlap.
    Equality,
    /// The claim is violated with interval separation.
    Violated,
    /// Still overlapping at the refinement cap.
    Undecided,
    /// Informational value; no claim attached.
    Recorded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WitnessValue {
    Rational(Rational),
    Interval(Interval),
    Named(BTreeMap<String, Interval>),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub input: String,
    pub value_or_interval: WitnessValue,
    pub status: WitnessStatus,
}

impl Witness {
    pub fn new(input: impl Into<String>, value: WitnessValue, status: WitnessStatus) -> Self {
        Witness {
            input: input.into(),
            value_or_interval: value,
            status,
        }
    }

    pub fn named<I, K>(input: impl Into<String>, values: I, status: WitnessStatus) -> Self
    where
        I: IntoIterator<Item = (K, Interval)>,
        K: Into<String>,
    {
        let map = values.into_iter().map(|(k, v)| (k.into(), v)).collect();
        Witness::new(input, WitnessValue::Named(map), status)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ErrataValue {
    Rational(Rational),
    Polynomial(Polynomial),
    Interval(Interval),
    Text(String),
}

impl fmt::Display for ErrataValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrataValue::Rational(r) => write!(f, "{r}"),
            ErrataValue::Polynomial(p) => write!(f, "{p}"),
            ErrataValue::Interval(i) => write!(f, "{i}"),
            ErrataValue::Text(t) => f.write_str(t),
        }
    }
}

/// A printed value next to its recomputation.
///
/// For exact values `matches` is plain equality. For a printed decimal
/// against an enclosure it means every point of the enclosure truncates or
/// rounds to the printed digits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrataEntry {
    pub location: String,
    pub printed: ErrataValue,
    pub recomputed: ErrataValue,
    #[serde(rename = "match")]
    pub matches: bool,
}

impl ErrataEntry {
    pub fn exact(location: impl Into<String>, printed: ErrataValue, recomputed: ErrataValue) -> Self {
        let matches = printed == recomputed;
        ErrataEntry {
            location: location.into(),
            printed,
            recomputed,
            matches,
        }
    }

    pub fn rational(location: impl Into<String>, printed: Rational, recomputed: Rational) -> Self {
        Self::exact(
            location,
            ErrataValue::Rational(printed),
            ErrataValue::Rational(recomputed),
        )
    }

    pub fn text(location: impl Into<String>, printed: &str, recomputed: &str) -> Self {
        Self::exact(
            location,
            ErrataValue::Text(printed.to_string()),
            ErrataValue::Text(recomputed.to_string()),
        )
    }

    /// Printed decimal digits `printed` against the enclosure `value`.
    pub fn digits(location: impl Into<String>, printed: &str, value: &Interval) -> Self {
        let p: Rational = printed.parse().expect("printed decimal");
        ErrataEntry {
            location: location.into(),
            matches: digits_consistent(printed, value),
            printed: ErrataValue::Rational(p),
            recomputed: ErrataValue::Interval(value.clone()),
        }
    }
}

/// Whether every point of `value` truncates or rounds to the decimal string
/// `printed` (a non-negative decimal with `k` fractional digits).
pub fn digits_consistent(printed: &str, value: &Interval) -> bool {
    let p: Rational = match printed.parse() {
        Ok(p) => p,
        Err(_) => return false,
    };
    let k = printed.split_once('.').map_or(0, |(_, frac)| frac.len()) as i32;
    let ulp = Rational::pow10(-k);
    let half = &ulp * Rational::frac(1, 2);
    let truncated = value.lo() >= &p && value.hi() < &(&p + &ulp);
    let rounded = value.lo() >= &(&p - &half) && value.hi() < &(&p + &half);
    truncated || rounded
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub params: BTreeMap<String, String>,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub errata: Vec<ErrataEntry>,
}

impl VerificationReport {
    /// Builds a report and derives its verdict from witnesses and errata.
    pub fn new(
        check_name: impl Into<String>,
        params: BTreeMap<String, String>,
        witnesses: Vec<Witness>,
        errata: Vec<ErrataEntry>,
    ) -> Self {
        let verdict = derive_verdict(&witnesses, &errata);
        VerificationReport {
            check_name: check_name.into(),
            params,
            verdict,
            witnesses,
            errata,
        }
    }

    /// Concatenates witnesses and errata; the verdict is the worst one.
    pub fn merge(check_name: impl Into<String>, params: BTreeMap<String, String>, parts: Vec<Self>) -> Self {
        let mut witnesses = Vec::new();
        let mut errata = Vec::new();
        let mut verdict = Verdict::Pass;
        for part in parts {
            verdict = verdict.max(part.verdict);
            for mut w in part.witnesses {
                w.input = format!("{}: {}", part.check_name, w.input);
                witnesses.push(w);
            }
            for mut e in part.errata {
                e.location = format!("{}: {}", part.check_name, e.location);
                errata.push(e);
            }
        }
        VerificationReport {
            check_name: check_name.into(),
            params,
            verdict,
            witnesses,
            errata,
        }
    }

    pub fn violations(&self) -> impl Iterator<Item = &Witness> {
        self.witnesses.iter().filter(|w| w.status == WitnessStatus::Violated)
    }

    pub fn undecided(&self) -> impl Iterator<Item = &Witness> {
        self.witnesses.iter().filter(|w| w.status == WitnessStatus::Undecided)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &ErrataEntry> {
        self.errata.iter().filter(|e| !e.matches)
    }
}

fn derive_verdict(witnesses: &[Witness], errata: &[ErrataEntry]) -> Verdict {
    if witnesses.iter().any(|w| w.status == WitnessStatus::Violated) {
        Verdict::Fail
    } else if witnesses.iter().any(|w| w.status == WitnessStatus::Undecided) {
        Verdict::Inconclusive
    } else if errata.iter().any(|e| !e.matches) {
        Verdict::PassWithErrata
    } else {
        Verdict::Pass
    }
}

pub(crate) fn params<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}
