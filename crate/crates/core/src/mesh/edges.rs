/// Undirected edges derived from triangle connectivity.
///
/// Edge ids follow the order of the sorted `(min, max)` endpoint keys, so the
/// numbering depends only on the connectivity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edges {
    /// `[low, high]` node indices per edge.
    pub endpoints: Vec<[usize; 2]>,
    /// Edge ids of triangle `t`: local edge `k` joins vertex `k` and `k + 1`.
    pub tri_edges: Vec<[usize; 3]>,
    /// Number of triangles sharing each edge.
    pub multiplicity: Vec<u32>,
}

impl Edges {
    pub fn build(triangles: &[[usize; 3]], node_count: usize) -> Edges {
        assert!(
            node_count <= u32::MAX as usize && triangles.len() * 3 <= u32::MAX as usize,
            "mesh too large for 32-bit edge keys"
        );
        let mut keys: Vec<(u64, u32)> = Vec::with_capacity(triangles.len() * 3);
        for (t, tri) in triangles.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                keys.push((((lo as u64) << 32) | hi as u64, (3 * t + k) as u32));
            }
        }
        keys.sort_unstable();

        let mut endpoints = Vec::with_capacity(keys.len() / 2 + 1);
        let mut multiplicity: Vec<u32> = Vec::with_capacity(keys.len() / 2 + 1);
        let mut tri_edges = vec![[0usize; 3]; triangles.len()];
        let mut last = u64::MAX;
        for &(key, slot) in &keys {
            if key != last {
                endpoints.push([(key >> 32) as usize, (key & 0xffff_ffff) as usize]);
                multiplicity.push(0);
                last = key;
            }
            let e = endpoints.len() - 1;
            multiplicity[e] += 1;
            tri_edges[slot as usize / 3][slot as usize % 3] = e;
        }
        Edges {
            endpoints,
            tri_edges,
            multiplicity,
        }
    }

    pub fn len(&self) -> usize {
        self.endpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.endpoints.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_triangles_share_one_edge() {
        let e = Edges::build(&[[0, 1, 2], [0, 2, 3]], 4);
        assert_eq!(e.len(), 5);
        assert_eq!(e.endpoints, vec![[0, 1], [0, 2], [0, 3], [1, 2], [2, 3]]);
        assert_eq!(e.multiplicity, vec![1, 2, 1, 1, 1]);
        assert_eq!(e.tri_edges[0], [0, 3, 1]);
        assert_eq!(e.tri_edges[1], [1, 4, 2]);
    }
}
