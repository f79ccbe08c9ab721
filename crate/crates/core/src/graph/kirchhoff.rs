use num_bigint::BigInt;

use super::{laplacian, Graph};
use crate::homology::{cokernel, FgAbelianGroup};
use crate::{Error, Result};

/// Torsion of `coker L`, the sandpile group of a connected graph.
pub fn jacobian(g: &Graph) -> Result<FgAbelianGroup> {
    g.require_connected()?;
    Ok(cokernel(&laplacian(g)).torsion_part())
}

/// Number of spanning trees, read off as `|tors coker L|` and cross-checked
/// against the reduced Laplacian determinant.
pub fn spanning_tree_count(g: &Graph) -> Result<BigInt> {
    let tau = jacobian(g)?.torsion_order();
    let cofactor = reduced_laplacian_determinant(g, 0)?;
    if tau != cofactor {
        return Err(Error::Defect(format!(
            "sandpile order {tau} disagrees with reduced Laplacian determinant {cofactor}"
        )));
    }
    Ok(tau)
}

/// `det L_vv`, the Laplacian with row and column `v` deleted.
pub fn reduced_laplacian_determinant(g: &Graph, v: usize) -> Result<BigInt> {
    let n = g.vertex_count();
    if v >= n {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            vertex_count: n,
        });
    }
    let keep: Vec<usize> = (0..n).filter(|&i| i != v).collect();
    laplacian(g).select(&keep, &keep).determinant()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Counts edge subsets of size n-1 that connect the graph.
    fn brute_force_trees(g: &Graph) -> u64 {
        let n = g.vertex_count();
        let m = g.edges().len();
        let mut count = 0;
        for mask in 0u64..(1 << m) {
            if mask.count_ones() as usize != n - 1 {
                continue;
            }
            let edges = (0..m)
                .filter(|j| mask >> j & 1 == 1)
                .map(|j| g.edges()[j])
                .collect();
            if Graph::new(n, edges).unwrap().is_connected() {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn tree_counts_match_enumeration() {
        for (g, want) in [
            (Graph::complete(3), 3),
            (Graph::cycle(4), 4),
            (Graph::complete(5), 125),
            (Graph::complete(4), 16),
            (Graph::path(3), 1),
        ] {
            assert_eq!(brute_force_trees(&g), want);
            assert_eq!(spanning_tree_count(&g).unwrap(), BigInt::from(want));
        }
    }

    #[test]
    fn jacobian_examples() {
        let two = |xs: &[i64]| xs.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(jacobian(&Graph::complete(3)).unwrap().torsion_factors(), &two(&[3])[..]);
        assert_eq!(jacobian(&Graph::complete(4)).unwrap().torsion_factors(), &two(&[4, 4])[..]);
        assert!(jacobian(&Graph::path(3)).unwrap().is_trivial());
    }

    #[test]
    fn single_vertex_and_disconnected() {
        let g = Graph::new(1, vec![]).unwrap();
        assert_eq!(spanning_tree_count(&g).unwrap(), BigInt::from(1));
        let h = Graph::new(3, vec![(0, 1)]).unwrap();
        assert_eq!(spanning_tree_count(&h), Err(Error::Disconnected));
        assert_eq!(jacobian(&h), Err(Error::Disconnected));
    }

    #[test]
    fn multigraph_counts() {
        // doubled edge plus a pendant: 2 spanning trees
        let g = Graph::new(3, vec![(0, 1), (1, 0), (1, 2)]).unwrap();
        assert_eq!(spanning_tree_count(&g).unwrap(), BigInt::from(2));
        assert_eq!(brute_force_trees(&g), 2);
    }
}
