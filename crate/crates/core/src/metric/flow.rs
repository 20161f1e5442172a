use std::collections::VecDeque;

use crate::rational::Rational;

/// Whether mass `supply` can be moved onto `demand` (equal totals) using
/// only the pairs accepted by `allowed`. Edmonds-Karp with exact
/// capacities.
pub fn transport_feasible(supply: &[Rational], demand: &[Rational], allowed: impl Fn(usize, usize) -> bool) -> bool {
    let (n, m) = (supply.len(), demand.len());
    let source = n + m;
    let sink = source + 1;
    let size = sink + 1;
    let mut cap = vec![vec![Rational::zero(); size]; size];
    let total: Rational = supply.iter().sum();
    let unbounded = &total + &Rational::one();
    for i in 0..n {
        cap[source][i] = supply[i].clone();
        for j in 0..m {
            if allowed(i, j) {
                cap[i][n + j] = unbounded.clone();
            }
        }
    }
    for j in 0..m {
        cap[n + j][sink] = demand[j].clone();
    }
    let mut flow = Rational::zero();
    loop {
        let mut prev = vec![usize::MAX; size];
        prev[source] = source;
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            if x == sink {
                break;
            }
            for y in 0..size {
                if prev[y] == usize::MAX && cap[x][y].is_positive() {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if prev[sink] == usize::MAX {
            break;
        }
        let mut push = unbounded.clone();
        let mut y = sink;
        while y != source {
            let x = prev[y];
            push = push.min(cap[x][y].clone());
            y = x;
        }
        let mut y = sink;
        while y != source {
            let x = prev[y];
            cap[x][y] = &cap[x][y] - &push;
            cap[y][x] = &cap[y][x] + &push;
            y = x;
        }
        flow += push;
    }
    flow == total
}
