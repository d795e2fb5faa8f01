use super::simplex::solve_lp;
use super::{EngineError, EngineSolution, EngineStatus, LpModel, MilpEngine};

const INT_TOL: f64 = 1e-6;

/// Depth-first branch and bound over the native simplex.
#[derive(Clone, Copy, Debug)]
pub struct NativeEngine {
    pub max_nodes: usize,
}

impl Default for NativeEngine {
    fn default() -> Self {
        Self { max_nodes: 100_000 }
    }
}

impl MilpEngine for NativeEngine {
    fn name(&self) -> &'static str {
        "native"
    }

    fn solve(&self, model: &LpModel) -> Result<EngineSolution, EngineError> {
        if !model.integer.iter().any(|&b| b) {
            return solve_lp(model);
        }
        let mut incumbent: Option<(f64, Vec<f64>)> = None;
        let mut stack = vec![(model.col_lower.clone(), model.col_upper.clone())];
        let mut nodes = 0usize;
        let mut node_lp = model.clone();
        while let Some((lower, upper)) = stack.pop() {
            nodes += 1;
            if nodes > self.max_nodes {
                return Err(EngineError::Failed {
                    engine: "native",
                    reason: format!("node limit {} reached", self.max_nodes),
                });
            }
            node_lp.col_lower = lower;
            node_lp.col_upper = upper;
            let relax = solve_lp(&node_lp)?;
            match relax.status {
                EngineStatus::Infeasible => continue,
                EngineStatus::Unbounded => {
                    return Ok(EngineSolution::without_point(EngineStatus::Unbounded))
                }
                EngineStatus::Optimal => {}
            }
            if let Some((best, _)) = &incumbent {
                if relax.objective >= best - 1e-9 * best.abs().max(1.0) {
                    continue;
                }
            }
            let branch = (0..model.num_cols())
                .filter(|&j| model.integer[j])
                .map(|j| (j, (relax.values[j] - relax.values[j].round()).abs()))
                .filter(|&(_, f)| f > INT_TOL)
                .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)));
            match branch {
                None => {
                    let mut x = relax.values;
                    for j in 0..x.len() {
                        if model.integer[j] {
                            x[j] = x[j].round();
                        }
                    }
                    incumbent = Some((model.objective(&x), x));
                }
                Some((j, _)) => {
                    let v = relax.values[j];
                    let mut down = (node_lp.col_lower.clone(), node_lp.col_upper.clone());
                    down.1[j] = v.floor();
                    let mut up = (node_lp.col_lower.clone(), node_lp.col_upper.clone());
                    up.0[j] = v.ceil();
                    // The child on the rounding side is explored first.
                    if v - v.floor() < 0.5 {
                        stack.push(up);
                        stack.push(down);
                    } else {
                        stack.push(down);
                        stack.push(up);
                    }
                }
            }
        }
        Ok(match incumbent {
            Some((objective, values)) => EngineSolution {
                status: EngineStatus::Optimal,
                values,
                objective,
            },
            None => EngineSolution::without_point(EngineStatus::Infeasible),
        })
    }
}
