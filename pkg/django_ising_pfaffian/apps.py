from django.apps import AppConfig


class DjangoIsingPfaffianConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "django_ising_pfaffian"
    verbose_name = "Django Ising Pfaffian"
