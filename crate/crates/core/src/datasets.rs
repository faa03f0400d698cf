//! The four published example tables and the P-values reported for them.

use crate::error::{Error, Result};
use crate::statistics::StatisticKind;
use crate::table::ContingencyTable;

pub const NAMES: [&str; 4] = ["danish", "mania", "republican", "mania2"];

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: &'static str,
    pub table: ContingencyTable,
    /// Reported P-values for chi2, g2, ft, nll and frobenius, estimated from
    /// 4,000,000 simulations each.
    pub published_pvalues: Vec<(StatisticKind, f64)>,
    pub source: &'static str,
}

impl Dataset {
    pub fn published(&self, kind: StatisticKind) -> Option<f64> {
        self.published_pvalues.iter().find(|(k, _)| *k == kind).map(|&(_, p)| p)
    }
}

struct Fixture {
    name: &'static str,
    source: &'static str,
    row_labels: &'static [&'static str],
    col_labels: &'static [&'static str],
    counts: &'static [&'static [u64]],
    /// chi2, g2, ft, nll, frobenius
    pvalues: [f64; 5],
}

const FIXTURES: [Fixture; 4] = [
    Fixture {
        name: "danish",
        source: "Polls in June 1983 for Danish parliamentary elections (Andersen, The Statistical Analysis of Categorical Data, ch. 4)",
        row_labels: &["A", "B", "C", "E", "F", "K", "M", "Q", "V", "Y", "Z"],
        col_labels: &["Poll 1", "Poll 2"],
        counts: &[
            &[416, 268],
            &[45, 22],
            &[338, 160],
            &[13, 6],
            &[131, 66],
            &[18, 10],
            &[47, 16],
            &[20, 8],
            &[129, 92],
            &[22, 9],
            &[76, 32],
        ],
        pvalues: [0.0868, 0.0906, 0.0959, 0.0905, 0.00838],
    },
    Fixture {
        name: "mania",
        source: "Reasons for premature termination of treatment of manic patients (Bowden et al., 1994)",
        row_labels: &[
            "Lack of efficacy",
            "Intolerance",
            "Recovered",
            "Noncompliance",
            "Another illness",
            "Administration",
            "Not terminated",
        ],
        col_labels: &["Divalproex", "Lithium", "Placebo"],
        counts: &[&[21, 12, 38], &[4, 4, 2], &[3, 2, 2], &[1, 1, 3], &[0, 1, 0], &[4, 2, 2], &[36, 14, 27]],
        pvalues: [0.145, 0.292, 0.493, 0.132, 0.0286],
    },
    Fixture {
        name: "republican",
        source: "2012 Republican presidential nomination, CBS News and Pew Research Center polls of November 2011 \
                 (counts reconstructed from rounded percentages)",
        row_labels: &[
            "Michele Bachmann",
            "Herman Cain",
            "Newt Gingrich",
            "Jon Huntsman",
            "Ron Paul",
            "Rick Perry",
            "Mitt Romney",
            "Rick Santorum",
            "Do not know",
        ],
        col_labels: &["CBS", "Pew"],
        counts: &[&[15, 21], &[69, 103], &[57, 66], &[4, 4], &[19, 33], &[31, 37], &[57, 91], &[8, 8], &[65, 49]],
        pvalues: [0.123, 0.138, 0.157, 0.114, 0.0344],
    },
    Fixture {
        name: "mania2",
        source: "Reactions of manic patients to prior treatment with lithium (Bowden et al., 1994)",
        row_labels: &[
            "Effective and tolerated",
            "Effective but not tolerated",
            "Ineffective but tolerated",
            "Ineffective and not tolerated",
            "No prior lithium treatment",
        ],
        col_labels: &["Divalproex", "Lithium", "Placebo"],
        counts: &[&[22, 16, 19], &[7, 0, 6], &[19, 11, 31], &[6, 4, 5], &[15, 5, 13]],
        pvalues: [0.276, 0.171, 0.0794, 0.235, 0.199],
    },
];

const PVALUE_ORDER: [StatisticKind; 5] = [
    StatisticKind::ChiSquare,
    StatisticKind::LogLikelihoodRatio,
    StatisticKind::FreemanTukey,
    StatisticKind::NegLogLikelihood,
    StatisticKind::Frobenius,
];

fn build(fixture: &Fixture) -> Dataset {
    let to_strings = |labels: &[&str]| labels.iter().map(|s| (*s).to_owned()).collect::<Vec<_>>();
    let table = ContingencyTable::from_rows(fixture.counts)
        .and_then(|t| t.with_row_labels(to_strings(fixture.row_labels)))
        .and_then(|t| t.with_col_labels(to_strings(fixture.col_labels)))
        .expect("embedded fixture is valid");
    Dataset {
        name: fixture.name,
        table,
        published_pvalues: PVALUE_ORDER.into_iter().zip(fixture.pvalues).collect(),
        source: fixture.source,
    }
}

/// Looks up a bundled dataset by name (case-insensitive).
pub fn get_dataset(name: &str) -> Result<Dataset> {
    FIXTURES
        .iter()
        .find(|f| f.name.eq_ignore_ascii_case(name.trim()))
        .map(build)
        .ok_or_else(|| Error::UnknownDataset { name: name.to_owned(), valid: NAMES.join(", ") })
}

pub fn all() -> Vec<Dataset> {
    FIXTURES.iter().map(build).collect()
}
