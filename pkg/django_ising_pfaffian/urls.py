from django.urls import path
from . import views

app_name = "django_ising_pfaffian"

urlpatterns = [
    path("evaluate/", views.evaluate, name="evaluate"),
]
