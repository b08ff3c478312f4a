from .data import Hyperparameters, Sample, split_dataset, vectorize_dataset, vectorize_snippet
from .lstm import (
    LstmParameters,
    backward,
    bce_loss,
    forward_batch,
    init_parameters,
    loss_and_gradients,
    lstm_forward,
    make_dropout_mask,
    zero_parameters,
)
from .training import TrainedModel, load_model, predict, predict_batch, save_model, train

__all__ = [
    "Hyperparameters",
    "LstmParameters",
    "Sample",
    "TrainedModel",
    "backward",
    "bce_loss",
    "forward_batch",
    "init_parameters",
    "load_model",
    "loss_and_gradients",
    "lstm_forward",
    "make_dropout_mask",
    "predict",
    "predict_batch",
    "save_model",
    "split_dataset",
    "train",
    "vectorize_dataset",
    "vectorize_snippet",
    "zero_parameters",
]
