//! Non-dominated sorting, crowding distance and 2-D hypervolume.

/// True iff `a` dominates `b` (componentwise <= with at least one strict
/// improvement), minimization sense.
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b.iter()) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

/// Fast non-dominated sort: partitions indices into fronts F1, F2, ...
/// Every member of a front is dominated only by members of earlier fronts.
pub fn nondominated_sort(points: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let n = points.len();
    if n == 0 {
        return Vec::new();
    }
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    for i in 0..n {
        for j in i + 1..n {
            if dominates(&points[i], &points[j]) {
                dominated_by[i].push(j);
                domination_count[j] += 1;
            } else if dominates(&points[j], &points[i]) {
                dominated_by[j].push(i);
                domination_count[i] += 1;
            }
        }
    }
    let mut fronts: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| domination_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by[i] {
                domination_count[j] -= 1;
                if domination_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::take(&mut current));
        current = next;
    }
    fronts
}

/// Crowding distance of a mutually non-dominated front.
///
/// Per objective the front is sorted (stably, ties by index); boundary
/// solutions get infinite distance and interior ones accumulate the
/// normalized neighbor gap. A zero objective range contributes nothing.
pub fn crowding_distance(front: &[Vec<f64>]) -> Vec<f64> {
    let n = front.len();
    if n == 0 {
        return Vec::new();
    }
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let m = front[0].len();
    let mut dist = vec![0.0f64; n];
    let mut order: Vec<usize> = (0..n).collect();
    for obj in 0..m {
        order.sort_by(|&a, &b| {
            front[a][obj]
                .partial_cmp(&front[b][obj])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        let lo = front[order[0]][obj];
        let hi = front[order[n - 1]][obj];
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        for k in 1..n - 1 {
            let gap = front[order[k + 1]][obj] - front[order[k - 1]][obj];
            dist[order[k]] += gap / range;
        }
    }
    dist
}

/// Hypervolume dominated by a 2-objective front relative to `reference`
/// (minimization; points not dominating the reference contribute nothing).
pub fn hypervolume_2d(points: &[Vec<f64>], reference: (f64, f64)) -> f64 {
    let mut pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p[0] < reference.0 && p[1] < reference.1)
        .map(|p| (p[0], p[1]))
        .collect();
    if pts.is_empty() {
        return 0.0;
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // keep the non-dominated staircase: ascending x, strictly descending y
    let mut stairs: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for p in pts {
        if stairs.last().is_none_or(|last| p.1 < last.1) {
            stairs.push(p);
        }
    }
    let mut hv = 0.0;
    let mut prev_y = reference.1;
    for (x, y) in stairs {
        hv += (reference.0 - x) * (prev_y - y);
        prev_y = y;
    }
    hv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_two_front_partition() {
        let pts = vec![vec![1.0, 2.0], vec![2.0, 1.0], vec![3.0, 3.0]];
        let fronts = nondominated_sort(&pts);
        assert_eq!(fronts, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn identical_points_share_front() {
        let pts = vec![vec![1.0, 1.0]; 4];
        let fronts = nondominated_sort(&pts);
        assert_eq!(fronts.len(), 1);
        assert_eq!(fronts[0].len(), 4);
    }

    #[test]
    fn empty_input() {
        assert!(nondominated_sort(&[]).is_empty());
    }

    #[test]
    fn matches_bruteforce_on_random_points() {
        // splitmix-style stream
        let mut state: u64 = 42;
        let mut next = move || {
            state = state.wrapping_add(0x9E3779B97F4A7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
            (z ^ (z >> 31)) as f64 / u64::MAX as f64
        };
        for trial in 0..20 {
            let n = 10 + (trial * 7) % 50;
            let m = 2 + trial % 3;
            let pts: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..m).map(|_| (next() * 10.0).round()).collect())
                .collect();
            let fronts = nondominated_sort(&pts);
            // oracle: rank by repeated removal of non-dominated points
            let mut rank = vec![usize::MAX; n];
            let mut remaining: Vec<usize> = (0..n).collect();
            let mut level = 0;
            while !remaining.is_empty() {
                let front: Vec<usize> = remaining
                    .iter()
                    .copied()
                    .filter(|&i| {
                        !remaining
                            .iter()
                            .any(|&j| j != i && dominates(&pts[j], &pts[i]))
                    })
                    .collect();
                for &i in &front {
                    rank[i] = level;
                }
                remaining.retain(|i| !front.contains(i));
                level += 1;
            }
            for (lvl, front) in fronts.iter().enumerate() {
                for &i in front {
                    assert_eq!(rank[i], lvl, "index {i} misranked in trial {trial}");
                }
            }
        }
    }

    #[test]
    fn permutation_invariance() {
        let pts = vec![
            vec![1.0, 5.0],
            vec![2.0, 2.0],
            vec![5.0, 1.0],
            vec![3.0, 4.0],
            vec![4.0, 4.0],
        ];
        let base = nondominated_sort(&pts);
        let perm = [4, 2, 0, 3, 1];
        let shuffled: Vec<Vec<f64>> = perm.iter().map(|&i| pts[i].clone()).collect();
        let other = nondominated_sort(&shuffled);
        // compare fronts as sets of points
        for (fa, fb) in base.iter().zip(other.iter()) {
            let mut a: Vec<&Vec<f64>> = fa.iter().map(|&i| &pts[i]).collect();
            let mut b: Vec<&Vec<f64>> = fb.iter().map(|&i| &shuffled[i]).collect();
            a.sort_by(|x, y| x.partial_cmp(y).unwrap());
            b.sort_by(|x, y| x.partial_cmp(y).unwrap());
            assert_eq!(a, b);
        }
    }

    #[test]
    fn crowding_three_points() {
        let front = vec![vec![0.0, 2.0], vec![1.0, 1.0], vec![2.0, 0.0]];
        let d = crowding_distance(&front);
        assert!(d[0].is_infinite());
        assert!(d[2].is_infinite());
        assert_eq!(d[1], 2.0);
    }

    #[test]
    fn crowding_two_points() {
        let d = crowding_distance(&[vec![1.0, 2.0], vec![2.0, 1.0]]);
        assert!(d.iter().all(|x| x.is_infinite()));
    }

    #[test]
    fn crowding_with_duplicates() {
        let front = vec![
            vec![0.0, 3.0],
            vec![1.0, 1.0],
            vec![1.0, 1.0],
            vec![3.0, 0.0],
        ];
        let d = crowding_distance(&front);
        assert!(d[0].is_infinite());
        assert!(d[3].is_infinite());
        assert!(d[1].is_finite());
        assert!(d[2].is_finite());
    }

    #[test]
    fn hypervolume_staircase() {
        let pts = vec![vec![1.0, 3.0], vec![2.0, 2.0], vec![3.0, 1.0]];
        // boxes to (4,4): (3)(1) + (2)(1) + (1)(1) = 6
        assert_eq!(hypervolume_2d(&pts, (4.0, 4.0)), 6.0);
        // dominated and out-of-reference points change nothing
        let mut with_noise = pts.clone();
        with_noise.push(vec![2.5, 2.5]);
        with_noise.push(vec![9.0, 9.0]);
        assert_eq!(hypervolume_2d(&with_noise, (4.0, 4.0)), 6.0);
    }
}
