"""Drug pair interaction event prediction on joint molecular graphs."""

from .data import DDISample, LoadResult, load_dataset
from .errors import MolBridgeError
from .model import ModelConfig, ModelParams, init_params, predict
from .smiles import FeaturedGraph, Molecule, featurize, parse_smiles
from .splits import SplitPlan, make_splits
from .train import RunRecord, TrainConfig
from .train import train as train_model

__version__ = "0.1.0"

__all__ = [
    "DDISample", "FeaturedGraph", "LoadResult", "ModelConfig", "ModelParams",
    "MolBridgeError", "Molecule", "RunRecord", "SplitPlan", "TrainConfig",
    "featurize", "init_params", "load_dataset", "make_splits", "parse_smiles",
    "predict", "train_model",
]
