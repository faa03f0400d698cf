// Published model and residual tables for the bundled datasets, one decimal
// as printed, rows and columns in fixture order.
#![allow(dead_code)]

pub struct Published {
    pub name: &'static str,
    pub model: &'static [&'static [f64]],
    /// Column percentages of the model.
    pub model_percent: &'static [&'static [f64]],
    pub differences: &'static [&'static [f64]],
    pub standardized: &'static [&'static [f64]],
}

pub const TABLES: [Published; 4] = [
    Published {
        name: "danish",
        model: &[
            &[441.6, 242.4],
            &[43.3, 23.7],
            &[321.5, 176.5],
            &[12.3, 6.7],
            &[127.2, 69.8],
            &[18.1, 9.9],
            &[40.7, 22.3],
            &[18.1, 9.9],
            &[142.7, 78.3],
            &[20.0, 11.0],
            &[69.7, 38.3],
        ],
        model_percent: &[
            &[35.2, 35.2],
            &[3.4, 3.4],
            &[25.6, 25.6],
            &[1.0, 1.0],
            &[10.1, 10.1],
            &[1.4, 1.4],
            &[3.2, 3.2],
            &[1.4, 1.4],
            &[11.4, 11.4],
            &[1.6, 1.6],
            &[5.6, 5.6],
        ],
        differences: &[
            &[-25.6, 25.6],
            &[1.7, -1.7],
            &[16.5, -16.5],
            &[0.7, -0.7],
            &[3.8, -3.8],
            &[-0.1, 0.1],
            &[6.3, -6.3],
            &[1.9, -1.9],
            &[-13.7, 13.7],
            &[2.0, -2.0],
            &[6.3, -6.3],
        ],
        standardized: &[
            &[-1.2, 1.6],
            &[0.3, -0.4],
            &[0.9, -1.2],
            &[0.2, -0.3],
            &[0.3, -0.5],
            &[-0.0, 0.0],
            &[1.0, -1.3],
            &[0.5, -0.6],
            &[-1.1, 1.5],
            &[0.4, -0.6],
            &[0.8, -1.0],
        ],
    },
    Published {
        name: "mania",
        model: &[
            &[27.4, 14.3, 29.4],
            &[3.9, 2.0, 4.1],
            &[2.7, 1.4, 2.9],
            &[1.9, 1.0, 2.1],
            &[0.4, 0.2, 0.4],
            &[3.1, 1.6, 3.3],
            &[29.7, 15.5, 31.8],
        ],
        model_percent: &[
            &[39.7, 39.7, 39.7],
            &[5.6, 5.6, 5.6],
            &[3.9, 3.9, 3.9],
            &[2.8, 2.8, 2.8],
            &[0.6, 0.6, 0.6],
            &[4.5, 4.5, 4.5],
            &[43.0, 43.0, 43.0],
        ],
        differences: &[
            &[-6.4, -2.3, 8.6],
            &[0.1, 2.0, -2.1],
            &[0.3, 0.6, -0.9],
            &[-0.9, 0.0, 0.9],
            &[-0.4, 0.8, -0.4],
            &[0.9, 0.4, -1.3],
            &[6.3, -1.5, -4.8],
        ],
        standardized: &[
            &[-1.2, -0.6, 1.6],
            &[0.1, 1.4, -1.0],
            &[0.2, 0.5, -0.5],
            &[-0.7, 0.0, 0.6],
            &[-0.6, 1.8, -0.6],
            &[0.5, 0.3, -0.7],
            &[1.2, -0.4, -0.9],
        ],
    },
    Published {
        name: "republican",
        model: &[
            &[15.9, 20.1],
            &[75.8, 96.2],
            &[54.2, 68.8],
            &[3.5, 4.5],
            &[22.9, 29.1],
            &[30.0, 38.0],
            &[65.3, 82.7],
            &[7.1, 8.9],
            &[50.3, 63.7],
        ],
        model_percent: &[
            &[4.9, 4.9],
            &[23.3, 23.3],
            &[16.7, 16.7],
            &[1.1, 1.1],
            &[7.1, 7.1],
            &[9.2, 9.2],
            &[20.1, 20.1],
            &[2.2, 2.2],
            &[15.5, 15.5],
        ],
        differences: &[
            &[-0.9, 0.9],
            &[-6.8, 6.8],
            &[2.8, -2.8],
            &[0.5, -0.5],
            &[-3.9, 3.9],
            &[1.0, -1.0],
            &[-8.3, 8.3],
            &[0.9, -0.9],
            &[14.7, -14.7],
        ],
        standardized: &[
            &[-0.2, 0.2],
            &[-0.8, 0.7],
            &[0.4, -0.3],
            &[0.3, -0.2],
            &[-0.8, 0.7],
            &[0.2, -0.2],
            &[-1.0, 0.9],
            &[0.4, -0.3],
            &[2.1, -1.8],
        ],
    },
    Published {
        name: "mania2",
        model: &[&[22.0, 11.5, 23.6], &[5.0, 2.6, 5.4], &[23.5, 12.3, 25.2], &[5.8, 3.0, 6.2], &[12.7, 6.6, 13.6]],
        model_percent: &[
            &[31.8, 31.8, 31.8],
            &[7.3, 7.3, 7.3],
            &[34.1, 34.1, 34.1],
            &[8.4, 8.4, 8.4],
            &[18.4, 18.4, 18.4],
        ],
        differences: &[&[0.0, 4.5, -4.6], &[2.0, -2.6, 0.6], &[-4.5, -1.3, 5.8], &[0.2, 1.0, -1.2], &[2.3, -1.6, -0.6]],
        standardized: &[
            &[0.0, 1.3, -0.9],
            &[0.9, -1.6, 0.3],
            &[-0.9, -0.4, 1.2],
            &[0.1, 0.6, -0.5],
            &[0.6, -0.6, -0.2],
        ],
    },
];

/// Random small tables for comparing simulation with enumeration:
/// 2 or 3 rows and columns, column totals between 1 and 8.
pub const ORACLE_CORPUS: [&[&[u64]]; 24] = [
    &[&[2, 0, 0], &[0, 1, 4], &[1, 5, 1]],
    &[&[5, 5, 0], &[1, 0, 2]],
    &[&[2, 0], &[2, 1]],
    &[&[3, 5, 0], &[3, 1, 4], &[1, 2, 0]],
    &[&[1, 1, 0], &[2, 3, 6], &[2, 0, 1]],
    &[&[5, 2, 7], &[2, 0, 0]],
    &[&[2, 0], &[0, 2], &[0, 1]],
    &[&[0, 1], &[1, 1], &[0, 2]],
    &[&[0, 0, 2], &[0, 2, 2], &[1, 3, 4]],
    &[&[2, 7], &[4, 1]],
    &[&[0, 3], &[1, 0], &[1, 0]],
    &[&[4, 0], &[1, 1]],
    &[&[1, 1, 0], &[0, 3, 1], &[1, 3, 0]],
    &[&[1, 1], &[5, 6]],
    &[&[1, 1, 1], &[3, 0, 1], &[3, 0, 3]],
    &[&[1, 1], &[0, 2], &[1, 1]],
    &[&[3, 0, 1], &[0, 0, 1], &[1, 1, 0]],
    &[&[5, 4, 6], &[1, 0, 2]],
    &[&[1, 0], &[1, 3]],
    &[&[1, 1, 1], &[0, 4, 0]],
    &[&[2, 0], &[1, 0], &[0, 1]],
    &[&[2, 2, 3], &[1, 0, 3]],
    &[&[1, 2, 0], &[1, 1, 2], &[3, 0, 1]],
    &[&[1, 4, 1], &[2, 2, 1], &[4, 1, 3]],
];
