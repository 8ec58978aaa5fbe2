use hydrogrid_core::formulation::{MilpModel, Relation};

/// Named, ranged-row LP/MILP in the shape solvers and MPS files use:
/// `row_lower <= A x <= row_upper`, `col_lower <= x <= col_upper`.
#[derive(Clone, Debug, PartialEq)]
pub struct StandardForm {
    pub name: String,
    pub col_names: Vec<String>,
    pub col_lower: Vec<f64>,
    pub col_upper: Vec<f64>,
    pub cost: Vec<f64>,
    pub integer: Vec<bool>,
    pub row_names: Vec<String>,
    pub row_lower: Vec<f64>,
    pub row_upper: Vec<f64>,
    /// Row-major sparse matrix, entries sorted by column.
    pub rows: Vec<Vec<(usize, f64)>>,
}

impl StandardForm {
    pub fn n_cols(&self) -> usize {
        self.col_names.len()
    }

    pub fn n_rows(&self) -> usize {
        self.row_names.len()
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.cost.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    pub fn activities(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&(c, a)| a * x[c]).sum())
            .collect()
    }

    /// Largest row or bound violation at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let rows = self
            .activities(x)
            .into_iter()
            .zip(self.row_lower.iter().zip(&self.row_upper))
            .map(|(a, (lo, hi))| (lo - a).max(a - hi).max(0.0));
        let cols = x
            .iter()
            .zip(self.col_lower.iter().zip(&self.col_upper))
            .map(|(v, (lo, hi))| (lo - v).max(v - hi).max(0.0));
        rows.chain(cols).fold(0.0, f64::max)
    }
}

impl From<&MilpModel> for StandardForm {
    fn from(model: &MilpModel) -> Self {
        let n = model.n_cols();
        let mut form = StandardForm {
            name: format!("hydrogrid_{}", model.variant),
            col_names: (0..n).map(|c| model.column_name(c)).collect(),
            col_lower: model.bounds.iter().map(|b| b.lower).collect(),
            col_upper: model.bounds.iter().map(|b| b.upper).collect(),
            cost: model.objective.clone(),
            integer: (0..n).map(|c| model.is_integer(c)).collect(),
            row_names: Vec::with_capacity(model.rows.len()),
            row_lower: Vec::with_capacity(model.rows.len()),
            row_upper: Vec::with_capacity(model.rows.len()),
            rows: Vec::with_capacity(model.rows.len()),
        };
        for row in &model.rows {
            let (lo, hi) = match row.relation {
                Relation::Le => (f64::NEG_INFINITY, row.rhs),
                Relation::Ge => (row.rhs, f64::INFINITY),
                Relation::Eq => (row.rhs, row.rhs),
            };
            form.row_names.push(row.label.to_string());
            form.row_lower.push(lo);
            form.row_upper.push(hi);
            form.rows.push(row.coeffs.clone());
        }
        form
    }
}
