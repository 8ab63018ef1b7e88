use rayon::prelude::*;

use super::{build_nfp_from_scanlines, Nfp};
use crate::geometry::DoubleScanline;

/// NFPs between oriented shape classes, indexed densely by `(a, b)`.
///
/// Pieces that share a shape and orientation share a class, so their NFPs
/// are built once.
#[derive(Debug)]
pub struct NfpTable {
    classes: usize,
    entries: Vec<Option<Nfp>>,
}

impl NfpTable {
    /// Builds `NFP(a, b)` for every pair accepted by `needed`, in parallel.
    pub fn build<F>(classes: &[DoubleScanline], needed: F) -> NfpTable
    where
        F: Fn(usize, usize) -> bool + Sync,
    {
        let n = classes.len();
        let entries = (0..n * n)
            .into_par_iter()
            .map(|idx| {
                let (a, b) = (idx / n, idx % n);
                needed(a, b).then(|| build_nfp_from_scanlines(&classes[a], &classes[b]))
            })
            .collect();
        NfpTable { classes: n, entries }
    }

    /// `NFP(a, b)`; panics if the pair was not requested at build time.
    #[inline]
    pub fn get(&self, a: usize, b: usize) -> &Nfp {
        self.entries[a * self.classes + b]
            .as_ref()
            .unwrap_or_else(|| panic!("NFP ({a}, {b}) was not precomputed"))
    }

    pub fn try_get(&self, a: usize, b: usize) -> Option<&Nfp> {
        self.entries.get(a * self.classes + b)?.as_ref()
    }

    /// Number of NFPs actually built.
    pub fn len(&self) -> usize {
        self.entries.iter().filter(|e| e.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &Nfp)> + '_ {
        let n = self.classes;
        self.entries
            .iter()
            .enumerate()
            .filter_map(move |(i, e)| e.as_ref().map(|nfp| ((i / n, i % n), nfp)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{encode, PixelShape, Point};

    #[test]
    fn builds_requested_pairs_only() {
        let classes = vec![
            encode(&PixelShape::rectangle(2, 1)),
            encode(&PixelShape::rectangle(3, 3)),
        ];
        let table = NfpTable::build(&classes, |a, b| a != b);
        assert_eq!(table.len(), 2);
        assert!(table.try_get(0, 0).is_none());
        let nfp = table.get(0, 1);
        assert!(nfp.contains(Point::new(0, 0)));
        assert_eq!(table.iter().map(|(k, _)| k).collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn reversed_pair_is_reflected() {
        let a = PixelShape::from_cells([Point::new(0, 0), Point::new(1, 0), Point::new(1, 1)]).unwrap();
        let b = PixelShape::rectangle(3, 2);
        let table = NfpTable::build(&[encode(&a), encode(&b)], |_, _| true);
        let (ab, ba) = (table.get(0, 1), table.get(1, 0));
        for y in -5..=5 {
            for x in -5..=5 {
                let u = Point::new(x, y);
                assert_eq!(ab.contains(u), ba.contains(-u), "{u:?}");
            }
        }
    }
}
