# Storage module

from storage.storage_manager import APP_VERSION, StorageManager, atomic_write, deep_merge, format_value

__all__ = ['APP_VERSION', 'StorageManager', 'atomic_write', 'deep_merge', 'format_value']
