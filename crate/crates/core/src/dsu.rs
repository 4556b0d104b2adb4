/// Union-find with a Z/2 label on each element relative to its root.
///
/// `union(x, y, odd)` records `label(x) + label(y) = odd`; a conflicting
/// relation marks the merged class as inconsistent.
#[derive(Debug, Clone)]
pub(crate) struct ParityDsu {
    parent: Vec<usize>,
    parity: Vec<bool>,
    rank: Vec<u8>,
    consistent: Vec<bool>,
}

impl ParityDsu {
    pub fn new(n: usize) -> Self {
        ParityDsu {
            parent: (0..n).collect(),
            parity: vec![false; n],
            rank: vec![0; n],
            consistent: vec![true; n],
        }
    }

    /// Root of `x` and the parity of `x` relative to it.
    pub fn find(&mut self, x: usize) -> (usize, bool) {
        let p = self.parent[x];
        if p == x {
            return (x, false);
        }
        let (root, pp) = self.find(p);
        self.parent[x] = root;
        self.parity[x] ^= pp;
        (root, self.parity[x])
    }

    pub fn union(&mut self, x: usize, y: usize, odd: bool) {
        let (rx, px) = self.find(x);
        let (ry, py) = self.find(y);
        if rx == ry {
            if (px ^ py) != odd {
                self.consistent[rx] = false;
            }
            return;
        }
        let (big, small) = if self.rank[rx] >= self.rank[ry] { (rx, ry) } else { (ry, rx) };
        self.parent[small] = big;
        self.parity[small] = px ^ py ^ odd;
        if self.rank[big] == self.rank[small] {
            self.rank[big] += 1;
        }
        let ok = self.consistent[big] && self.consistent[small];
        self.consistent[big] = ok;
    }

    pub fn root(&mut self, x: usize) -> usize {
        self.find(x).0
    }

    pub fn is_consistent(&mut self, x: usize) -> bool {
        let r = self.root(x);
        self.consistent[r]
    }

    /// Dense class ids numbered by first appearance in `0..n`.
    pub fn labels(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut id_of_root = vec![usize::MAX; n];
        let mut labels = vec![0; n];
        let mut next = 0;
        for x in 0..n {
            let r = self.root(x);
            if id_of_root[r] == usize::MAX {
                id_of_root[r] = next;
                next += 1;
            }
            labels[x] = id_of_root[r];
        }
        (labels, next)
    }
}
