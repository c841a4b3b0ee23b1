"""scikit-learn compatible wrappers around the passivity tests and bounds.

Each row of ``X`` is one SEA configuration: ``J, b, K, Pm, Im, Pt, It``
and, for spring targets, ``Kd``. The estimators are stateless; ``fit``
only validates input and records its shape.
"""
import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import bounds as bnd
from ._validation import FEATURES, check_configurations, check_target, row_to_config
from .model import build_impedance
from .passivity import DEFAULT_BOUNDARY_BAND, check_closed_form, check_numeric


class PassivityClassifier(ClassifierMixin, BaseEstimator):
    """Predict whether each configuration renders its target passively.

    Parameters
    ----------
    target : {"null", "spring"}
    route : {"closed_form", "numeric"}
        Which of the two independent tests decides ``predict``.
    boundary_band : float
        Relative band around a bound inside which a verdict is marginal.
    """

    def __init__(self, target="null", route="closed_form", boundary_band=DEFAULT_BOUNDARY_BAND):
        self.target = target
        self.route = route
        self.boundary_band = boundary_band

    def fit(self, X, y=None):
        check_target(self.target)
        if self.route not in ("closed_form", "numeric"):
            raise ValueError(f"route must be 'closed_form' or 'numeric', got {self.route!r}")
        X = check_configurations(X, self.target)
        self.n_features_in_ = X.shape[1]
        self.feature_names_in_ = np.array(FEATURES[: X.shape[1]], dtype=object)
        self.classes_ = np.array([False, True])
        return self

    def _verdicts(self, X):
        check_is_fitted(self)
        X = check_configurations(X, self.target)
        out = []
        for row in X:
            plant, gains, target = row_to_config(row, self.target)
            if self.route == "numeric":
                out.append(check_numeric(build_impedance(plant, gains, target), self.boundary_band))
            else:
                out.append(check_closed_form(plant, gains, target, self.boundary_band))
        return out

    def predict(self, X):
        return np.array([v.passive for v in self._verdicts(X)], dtype=bool)

    def predict_marginal(self, X):
        return np.array([v.marginal for v in self._verdicts(X)], dtype=bool)

    def decision_function(self, X):
        """Smallest closed-form relative margin; -1 where a bound does not exist."""
        check_is_fitted(self)
        X = check_configurations(X, self.target)
        scores = []
        for row in X:
            plant, gains, target = row_to_config(row, self.target)
            margins = bnd.bounds_report(plant, gains, target).margins
            vals = [-1.0 if m is None else m for m in margins.values()]
            scores.append(min(vals))
        return np.array(scores)


class BoundsTransformer(TransformerMixin, BaseEstimator):
    """Map configurations to ``[b_max, J_max, Kd_max]``.

    Unbounded constraints become ``inf`` and missing bounds ``nan`` so
    the output stays a float array.
    """

    def __init__(self, target="null"):
        self.target = target

    def fit(self, X, y=None):
        check_target(self.target)
        X = check_configurations(X, self.target)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self)
        X = check_configurations(X, self.target)

        def num(v):
            if v is bnd.UNBOUNDED:
                return np.inf
            return np.nan if v is None else float(v)

        rows = []
        for row in X:
            rep = bnd.bounds_report(*row_to_config(row, self.target))
            rows.append([num(rep.b_max), num(rep.J_max), num(rep.Kd_max)])
        return np.array(rows, dtype=float)

    def get_feature_names_out(self, input_features=None):
        return np.array(["b_max", "J_max", "Kd_max"], dtype=object)
