"""Classification data of two-parameter families with a parabolic cycle and a
saddle-node homoclinic curve: characteristic sets, skeletons, realization,
sparkling connections and bifurcation diagrams."""

__version__ = "0.1.0"
