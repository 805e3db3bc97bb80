use crate::bm::{BoseMesner, Spectrum};
use crate::dual::DualAlgebra;
use crate::error::Result;
use crate::graph::{intersection_array, Graph, IntersectionArray};
use crate::tol::Tolerances;

/// Everything that depends only on the graph: intersection numbers,
/// spectrum and the Bose-Mesner algebra.
#[derive(Debug, Clone)]
pub struct Scheme {
    pub graph: Graph,
    pub ia: IntersectionArray,
    pub spec: Spectrum,
    pub bm: BoseMesner,
    pub tol: Tolerances,
}

impl Scheme {
    pub fn new(graph: Graph, tol: Tolerances) -> Result<Self> {
        let ia = intersection_array(&graph)?;
        let spec = Spectrum::compute(&ia, graph.n(), &tol)?;
        let bm = BoseMesner::build(&graph, &spec, &tol)?;
        Ok(Scheme { graph, ia, spec, bm, tol })
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn diameter(&self) -> usize {
        self.ia.diameter
    }

    /// The dual algebra with respect to base vertex `x`, checked at the
    /// scheme's tolerances.
    pub fn dual(&self, x: usize) -> Result<DualAlgebra> {
        DualAlgebra::build(self, x, &self.tol)
    }
}
