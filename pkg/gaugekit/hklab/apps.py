from django.apps import AppConfig


class HklabConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'hklab'
    verbose_name = 'Gauge integration laboratory'
