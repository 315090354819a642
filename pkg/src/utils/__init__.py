"""Utils package for shared utilities."""

from .probability import entropy, information_gain, noisy_or

__all__ = ['entropy', 'information_gain', 'noisy_or']
