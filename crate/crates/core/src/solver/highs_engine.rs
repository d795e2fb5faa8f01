use highs::{HighsModelStatus, RowProblem, Sense};

use super::{EngineError, EngineSolution, EngineStatus, LpModel, MilpEngine};

/// HiGHS with tightened MIP gaps.
#[derive(Clone, Copy, Debug, Default)]
pub struct HighsEngine;

impl HighsEngine {
    fn run(&self, model: &LpModel, presolve: bool) -> Result<(HighsModelStatus, Vec<f64>), EngineError> {
        let mut pb = RowProblem::default();
        let cols: Vec<_> = (0..model.num_cols())
            .map(|j| {
                pb.add_column_with_integrality(
                    model.col_cost[j],
                    model.col_lower[j]..=model.col_upper[j],
                    model.integer[j],
                )
            })
            .collect();
        for row in &model.rows {
            pb.add_row(
                row.lower..=row.upper,
                row.coeffs.iter().map(|&(j, c)| (cols[j], c)),
            );
        }
        let mut m = pb.optimise(Sense::Minimise);
        m.make_quiet();
        m.set_option("mip_rel_gap", 1e-9);
        m.set_option("mip_abs_gap", 1e-7);
        if !presolve {
            m.set_option("presolve", "off");
        }
        let solved = m.try_solve().map_err(|e| EngineError::Failed {
            engine: "highs",
            reason: format!("{e:?}"),
        })?;
        let status = solved.status();
        let values = if status == HighsModelStatus::Optimal {
            solved.get_solution().columns().to_vec()
        } else {
            Vec::new()
        };
        Ok((status, values))
    }
}

impl MilpEngine for HighsEngine {
    fn name(&self) -> &'static str {
        "highs"
    }

    fn solve(&self, model: &LpModel) -> Result<EngineSolution, EngineError> {
        let (mut status, mut values) = self.run(model, true)?;
        if status == HighsModelStatus::UnboundedOrInfeasible {
            // Presolve cannot always tell the two apart.
            (status, values) = self.run(model, false)?;
        }
        match status {
            HighsModelStatus::Optimal => Ok(EngineSolution {
                status: EngineStatus::Optimal,
                objective: model.objective(&values),
                values,
            }),
            HighsModelStatus::Infeasible | HighsModelStatus::UnboundedOrInfeasible => {
                Ok(EngineSolution::without_point(EngineStatus::Infeasible))
            }
            HighsModelStatus::Unbounded => Ok(EngineSolution::without_point(EngineStatus::Unbounded)),
            other => Err(EngineError::Failed {
                engine: "highs",
                reason: format!("model status {other:?}"),
            }),
        }
    }
}
