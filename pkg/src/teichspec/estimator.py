"""scikit-learn style front end: Fenchel-Nielsen rows to log-length features."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .geometry import HypStructure, lengths
from .spectrum import BC, C, classes
from .surface import SurfaceType, default_pants_decomposition, validate


class LengthSpectrumTransformer(TransformerMixin, BaseEstimator):
    """Map Fenchel-Nielsen coordinate rows to (log) lengths of enumerated classes.

    Each input row is ``[curve_lengths..., twists..., boundary_lengths...]``
    for the default decomposition of ``surface`` (a ``(g, p, b)`` triple).
    With ``log=True`` the Chebyshev distance between two output rows is
    ``d_L`` (``family="C"``) or ``delta_L`` (``family="B∪C"``) at the chosen
    bound, see :func:`chebyshev_distances`.
    """

    def __init__(self, surface=(1, 0, 1), bound=6, family=C, log=True):
        self.surface = surface
        self.bound = bound
        self.family = family
        self.log = log

    def fit(self, X=None, y=None):
        st = validate(SurfaceType(*self.surface))
        if int(self.bound) < 1:
            raise ValueError("bound must be a positive integer")
        self.surface_type_ = st
        self.decomposition_ = default_pants_decomposition(st)
        self.classes_ = classes(st, self.family, int(self.bound))
        self.n_features_in_ = 2 * self.decomposition_.n_curves + st.boundary
        if X is not None:
            check_array(X, ensure_min_samples=0)
        return self

    def structures(self, X):
        check_is_fitted(self, "classes_")
        X = check_array(X, ensure_all_finite=True)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} coordinates per row, got {X.shape[1]}")
        return [HypStructure.from_vector(self.decomposition_, row) for row in X]

    def transform(self, X):
        rows = [lengths(s, self.classes_) for s in self.structures(X)]
        out = np.vstack(rows) if rows else np.zeros((0, len(self.classes_)))
        return np.log(out) if self.log else out

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "classes_")
        return np.array([str(c) for c in self.classes_], dtype=object)


def chebyshev_distances(F, G=None):
    """Pairwise max-abs differences of feature rows, ignoring NaN columns."""
    F = np.asarray(F, dtype=float)
    G = F if G is None else np.asarray(G, dtype=float)
    diff = np.abs(F[:, None, :] - G[None, :, :])
    return np.nanmax(diff, axis=2)


__all__ = ["LengthSpectrumTransformer", "chebyshev_distances", "BC", "C"]
