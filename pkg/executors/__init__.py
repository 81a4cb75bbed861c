"""
Executors for independent client and Monte-Carlo tasks.
"""

from .client_executor import ClientExecutor

__all__ = [
    'ClientExecutor',
]
