use colop_core::trees::Node;

/// Number of isomorphisms `a → b` preserving kinds and colors, found by
/// matching children against each other without canonical forms.
pub fn count_isos(a: &Node, b: &Node) -> u128 {
    match (a, b) {
        (Node::Leaf { color: x, .. }, Node::Leaf { color: y, .. }) => u128::from(x == y),
        (Node::Vertex(v), Node::Vertex(w)) => {
            if v.kind != w.kind || v.out != w.out || v.children.len() != w.children.len() {
                return 0;
            }
            let n = v.children.len();
            let table: Vec<Vec<u128>> = (0..n).map(|i| (0..n).map(|j| count_isos(&v.children[i], &w.children[j])).collect()).collect();
            fn go(i: usize, used: &mut [bool], table: &[Vec<u128>]) -> u128 {
                if i == table.len() {
                    return 1;
                }
                let mut total = 0;
                for j in 0..table.len() {
                    if !used[j] && table[i][j] > 0 {
                        used[j] = true;
                        total += table[i][j] * go(i + 1, used, table);
                        used[j] = false;
                    }
                }
                total
            }
            go(0, &mut vec![false; n], &table)
        }
        _ => 0,
    }
}
