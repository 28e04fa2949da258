//! The fifteen expectation values grouped by the five jointly measurable
//! observables that supply them.

use crate::state::TwoQubitState;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expectation {
    pub label: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableRow {
    /// The pair of commuting operators whose joint eigenstates the
    /// observable identifies.
    pub observable: &'static str,
    pub values: [Expectation; 3],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table5Report {
    pub rows: [ObservableRow; 5],
}

// (α, β) index pairs for the two mixed rows: (x,y),(y,z),(z,x) then (y,x),(z,y),(x,z).
const MIXED: [[(usize, usize); 3]; 2] = [[(0, 1), (1, 2), (2, 0)], [(1, 0), (2, 1), (0, 2)]];

const DIAG_LABELS: [[&str; 3]; 3] = [
    ["<sigma_x>", "<tau_x>", "<sigma_x tau_x>"],
    ["<sigma_y>", "<tau_y>", "<sigma_y tau_y>"],
    ["<sigma_z>", "<tau_z>", "<sigma_z tau_z>"],
];
const MIXED_LABELS: [[&str; 3]; 2] = [
    ["<sigma_x tau_y>", "<sigma_y tau_z>", "<sigma_z tau_x>"],
    ["<sigma_y tau_x>", "<sigma_z tau_y>", "<sigma_x tau_z>"],
];
const OBSERVABLES: [&str; 5] = [
    "sigma_x and tau_x",
    "sigma_y and tau_y",
    "sigma_z and tau_z",
    "sigma_x tau_y and sigma_y tau_z",
    "sigma_y tau_x and sigma_z tau_y",
];

pub fn table_of_five(state: &TwoQubitState) -> Table5Report {
    let (s, t, c) = (state.s(), state.t(), state.c());
    let diag = |a: usize| ObservableRow {
        observable: OBSERVABLES[a],
        values: [
            Expectation { label: DIAG_LABELS[a][0], value: s[a] },
            Expectation { label: DIAG_LABELS[a][1], value: t[a] },
            Expectation { label: DIAG_LABELS[a][2], value: c[(a, a)] },
        ],
    };
    let mixed = |r: usize| ObservableRow {
        observable: OBSERVABLES[3 + r],
        values: [0, 1, 2].map(|k| {
            let (a, b) = MIXED[r][k];
            Expectation { label: MIXED_LABELS[r][k], value: c[(a, b)] }
        }),
    };
    Table5Report {
        rows: [diag(0), diag(1), diag(2), mixed(0), mixed(1)],
    }
}

impl Table5Report {
    /// Reassembles (s, t, C) from the fifteen reported values.
    pub fn to_state(&self) -> TwoQubitState {
        let mut p = [0.0; 15];
        for a in 0..3 {
            let row = &self.rows[a].values;
            p[a] = row[0].value;
            p[3 + a] = row[1].value;
            p[6 + 4 * a] = row[2].value;
        }
        for r in 0..2 {
            for k in 0..3 {
                let (a, b) = MIXED[r][k];
                p[6 + 3 * a + b] = self.rows[3 + r].values[k].value;
            }
        }
        TwoQubitState::from_parameters(&p).expect("reported values are finite")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{Mat3, Vec3};

    #[test]
    fn chaotic_reports_zeros() {
        let rep = table_of_five(&TwoQubitState::chaotic());
        assert!(rep.rows.iter().flat_map(|r| r.values.iter()).all(|e| e.value == 0.0));
    }

    #[test]
    fn bell_rows() {
        let bell = TwoQubitState::new(Vec3::zeros(), Vec3::zeros(), -Mat3::identity()).unwrap();
        let rep = table_of_five(&bell);
        for row in &rep.rows[..3] {
            assert_eq!(row.values[0].value, 0.0);
            assert_eq!(row.values[1].value, 0.0);
            assert_eq!(row.values[2].value, -1.0);
        }
        for row in &rep.rows[3..] {
            assert!(row.values.iter().all(|e| e.value == 0.0));
        }
    }

    #[test]
    fn values_reassemble_exactly() {
        let st = TwoQubitState::new(
            Vec3::new(0.1, 0.2, 0.3),
            Vec3::new(0.4, 0.5, 0.6),
            Mat3::from_row_slice(&[0.11, 0.12, 0.13, 0.21, 0.22, 0.23, 0.31, 0.32, 0.33]),
        )
        .unwrap();
        let rep = table_of_five(&st);
        assert_eq!(rep.to_state(), st);
        assert_eq!(rep.rows[3].values[2].value, 0.31);
        assert_eq!(rep.rows[4].values[2].value, 0.13);
    }
}
