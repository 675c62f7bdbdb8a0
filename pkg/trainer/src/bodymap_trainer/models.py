"""Classifier architectures.

The default matches the reference setup (EfficientNet-B1 fine-tuned from
ImageNet weights).  When pretrained weights cannot be fetched (offline
environments), construction falls back to random initialization with a
warning; ``smallcnn`` is a compact from-scratch alternative that trains
in minutes on CPU.
"""

from __future__ import annotations

import logging

import torch.nn as nn

log = logging.getLogger(__name__)

ARCHITECTURES = ("efficientnet_b1", "mobilenet_v3_small", "smallcnn")


def _conv_block(cin: int, cout: int, stride: int) -> nn.Sequential:
    return nn.Sequential(
        nn.Conv2d(cin, cout, 3, stride=stride, padding=1, bias=False),
        nn.BatchNorm2d(cout),
        nn.ReLU(inplace=True),
    )


def _smallcnn(num_classes: int) -> nn.Module:
    return nn.Sequential(
        _conv_block(3, 16, 2),
        _conv_block(16, 32, 2),
        _conv_block(32, 64, 2),
        _conv_block(64, 128, 2),
        _conv_block(128, 128, 2),
        nn.AdaptiveAvgPool2d(1),
        nn.Flatten(),
        nn.Linear(128, num_classes),
    )


def build_model(arch: str, pretrained: bool = True, num_classes: int = 2) -> nn.Module:
    if arch == "smallcnn":
        if pretrained:
            log.info("smallcnn has no published weights; training from scratch")
        return _smallcnn(num_classes)

    import torchvision.models as tvm

    if arch == "efficientnet_b1":
        weights = tvm.EfficientNet_B1_Weights.IMAGENET1K_V1 if pretrained else None
        try:
            model = tvm.efficientnet_b1(weights=weights)
        except Exception as exc:  # weights unavailable (offline); fall back
            log.warning("pretrained weights unavailable (%s); using random init", exc)
            model = tvm.efficientnet_b1(weights=None)
        model.classifier[1] = nn.Linear(model.classifier[1].in_features, num_classes)
        return model
    if arch == "mobilenet_v3_small":
        weights = tvm.MobileNet_V3_Small_Weights.IMAGENET1K_V1 if pretrained else None
        try:
            model = tvm.mobilenet_v3_small(weights=weights)
        except Exception as exc:
            log.warning("pretrained weights unavailable (%s); using random init", exc)
            model = tvm.mobilenet_v3_small(weights=None)
        model.classifier[3] = nn.Linear(model.classifier[3].in_features, num_classes)
        return model
    raise ValueError(f"unknown architecture {arch!r}; choose one of {ARCHITECTURES}")
