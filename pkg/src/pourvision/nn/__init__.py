"""From-scratch differentiable layer library (numpy-backed)."""
from .activations import maxpool_backward, maxpool_forward, relu, relu_backward
from .checkpoint import load_checkpoint, save_checkpoint
from .conv import (ConvParams, DeconvParams, conv_backward, conv_forward,
                   conv_out_size, deconv_backward, deconv_forward,
                   deconv_out_size)
from .gradcheck import GradCheckReport, finite_diff_check
from .loss import sigmoid_ce_loss
from .lstm import (ConvLSTMParams, LstmStepCache, conv_lstm_backward,
                   conv_lstm_forward, conv_lstm_step)
from .optim import OptimizerState, global_norm, sgd_step
from .tensor import (CHECK_DTYPE, DEFAULT_DTYPE, ContractViolation,
                     check_finite, check_nchw, require, sigmoid)

__all__ = [
    "CHECK_DTYPE", "DEFAULT_DTYPE", "ContractViolation", "ConvParams",
    "ConvLSTMParams", "DeconvParams", "GradCheckReport", "LstmStepCache",
    "check_finite", "check_nchw", "conv_backward", "conv_forward",
    "conv_lstm_backward", "conv_lstm_forward", "conv_lstm_step",
    "conv_out_size", "deconv_backward", "deconv_forward", "deconv_out_size",
    "finite_diff_check", "global_norm", "load_checkpoint", "maxpool_backward",
    "maxpool_forward", "relu", "relu_backward", "require", "save_checkpoint",
    "sgd_step", "sigmoid", "sigmoid_ce_loss", "OptimizerState",
]
