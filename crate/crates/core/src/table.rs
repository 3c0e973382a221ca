//! Lower bounds for the ion-trap GHZ fidelities of Monz et al. (PRL 106,
//! 130506), computed from the GHZ-fidelity bound alone.

use serde::Serialize;

use crate::entanglement::{ghz_lower_bound, GHZ_ENTANGLEMENT};

/// `(ions, reported fidelity, published lower bound as printed, published percent)`.
pub const REPORTED: [(usize, f64, &str, f64); 5] = [
    (2, 0.986, "0.33", 66.0),
    (3, 0.970, "0.25", 50.0),
    (4, 0.957, "0.2", 40.0),
    (5, 0.944, "0.17", 34.0),
    (6, 0.892, "0.044", 8.8),
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub n_ions: usize,
    pub fidelity: f64,
    pub lower: f64,
    /// `lower` relative to the GHZ value, in percent.
    pub percent_of_ghz: f64,
    pub published: String,
    pub published_percent: f64,
    /// Set when `lower` does not truncate to the published value.
    pub flag: Option<String>,
}

/// True when `value` truncated to the decimals of `printed` gives `printed`
/// (the published "E >" entries are truncations of the bound).
fn truncates_to(value: f64, printed: &str) -> bool {
    let decimals = printed.split_once('.').map_or(0, |(_, d)| d.len()) as i32;
    let p: f64 = printed.parse().expect("printed value is a number");
    let step = 10f64.powi(-decimals);
    value >= p - 1e-12 && value < p + step - 1e-12
}

pub fn table1() -> Vec<TableRow> {
    REPORTED
        .iter()
        .map(|&(n_ions, fidelity, published, published_percent)| {
            let lower = ghz_lower_bound(fidelity);
            let flag = (!truncates_to(lower, published))
                .then(|| format!("published {published} but F={fidelity} gives {lower:.4}"));
            TableRow {
                n_ions,
                fidelity,
                lower,
                percent_of_ghz: 100.0 * lower / GHZ_ENTANGLEMENT,
                published: published.to_string(),
                published_percent,
                flag,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_rule() {
        assert!(truncates_to(0.3333, "0.33"));
        assert!(truncates_to(0.2099, "0.2"));
        assert!(!truncates_to(0.048, "0.044"));
        assert!(!truncates_to(0.329, "0.33"));
    }

    #[test]
    fn only_the_six_ion_row_is_flagged() {
        let rows = table1();
        let flagged: Vec<usize> = rows.iter().filter(|r| r.flag.is_some()).map(|r| r.n_ions).collect();
        assert_eq!(flagged, vec![6]);
        let msg = rows[4].flag.as_deref().unwrap();
        assert!(msg.contains("0.044") && msg.contains("0.0480"), "{msg}");
    }
}
