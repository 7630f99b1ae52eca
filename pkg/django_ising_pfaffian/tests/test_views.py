from django.test import TestCase, Client
from django.contrib.auth import get_user_model
from django.urls import reverse
from django_ising_pfaffian.fixtures import bundled_fixture_text
import json

User = get_user_model()


class EvaluateViewTest(TestCase):
    def setUp(self):
        self.client = Client()
        self.user = User.objects.create_user(
            username="testuser", password="testpass123"
        )
        self.evaluate_url = reverse("django_ising_pfaffian:evaluate")

    def post(self, body):
        return self.client.post(
            self.evaluate_url, data=json.dumps(body), content_type="application/json"
        )

    def test_evaluate_requires_login(self):
        """Test that evaluation requires authentication"""
        response = self.client.post(self.evaluate_url)
        self.assertEqual(response.status_code, 302)  # Redirect to login

    def test_evaluate_get_not_allowed(self):
        """Test that GET requests are rejected"""
        self.client.login(username="testuser", password="testpass123")
        response = self.client.get(self.evaluate_url)
        self.assertEqual(response.status_code, 405)

    def test_evaluate_invalid_json(self):
        """Test evaluation with a malformed body"""
        self.client.login(username="testuser", password="testpass123")
        response = self.client.post(
            self.evaluate_url, data="not json", content_type="application/json"
        )
        self.assertEqual(response.status_code, 400)
        data = json.loads(response.content)
        self.assertFalse(data["success"])

    def test_evaluate_body_not_utf8(self):
        """Test that an undecodable body is a client error"""
        self.client.login(username="testuser", password="testpass123")
        response = self.client.post(
            self.evaluate_url, data=b'{"graph": "\xff"}', content_type="application/json"
        )
        self.assertEqual(response.status_code, 400)
        self.assertFalse(json.loads(response.content)["success"])

    def test_evaluate_k4(self):
        """Test the even polynomial of planar K4"""
        self.client.login(username="testuser", password="testpass123")
        response = self.post({"graph": bundled_fixture_text("k4"), "all_ones": True})
        self.assertEqual(response.status_code, 200)
        data = json.loads(response.content)
        self.assertTrue(data["success"])
        self.assertEqual(data["operation"], "evenpoly")
        self.assertEqual(data["value"], "8")

    def test_evaluate_k5_with_weights(self):
        """Test explicit weights on K5"""
        self.client.login(username="testuser", password="testpass123")
        weights = {str(e): 1 for e in range(10)}
        response = self.post(
            {"graph": bundled_fixture_text("k5"), "weights": weights, "timing": False}
        )
        data = json.loads(response.content)
        self.assertEqual(data["value"], "64")
        self.assertEqual(data["family_size"], 4)
        self.assertNotIn("timing", data)

    def test_evaluate_genus(self):
        """Test the genus operation"""
        self.client.login(username="testuser", password="testpass123")
        response = self.post({"graph": bundled_fixture_text("k33"), "operation": "genus"})
        data = json.loads(response.content)
        self.assertEqual(data["genus"], 1)
        self.assertEqual(data["faces"], 3)

    def test_evaluate_ising(self):
        """Test the partition function of a loop"""
        self.client.login(username="testuser", password="testpass123")
        response = self.post(
            {
                "graph": bundled_fixture_text("loop"),
                "operation": "ising",
                "weights": {"0": 3},
            }
        )
        self.assertEqual(json.loads(response.content)["value"], "6")

    def test_evaluate_bad_graph(self):
        """Test that a malformed graph file is a 400"""
        self.client.login(username="testuser", password="testpass123")
        response = self.post({"graph": "V 2\nX 1\n", "all_ones": True})
        self.assertEqual(response.status_code, 400)
        data = json.loads(response.content)
        self.assertFalse(data["success"])
        self.assertIn("line 2", data["error"])

    def test_evaluate_missing_weight(self):
        """Test that a missing weight is a 400 naming the edge"""
        self.client.login(username="testuser", password="testpass123")
        weights = {str(e): 1 for e in range(10) if e != 7}
        response = self.post({"graph": bundled_fixture_text("k5"), "weights": weights})
        self.assertEqual(response.status_code, 400)
        self.assertIn("edge 7", json.loads(response.content)["error"])

    def test_evaluate_unknown_operation(self):
        """Test that an unknown operation is a 400"""
        self.client.login(username="testuser", password="testpass123")
        response = self.post({"graph": bundled_fixture_text("k4"), "operation": "dance"})
        self.assertEqual(response.status_code, 400)

    def test_evaluate_capacity(self):
        """Test that a cap overflow is a 413"""
        self.client.login(username="testuser", password="testpass123")
        with self.settings(ISING_PFAFFIAN_CONFIG={"enumeration_cap": 8}):
            response = self.post(
                {"graph": bundled_fixture_text("k5"), "operation": "verify", "trials": 1}
            )
        self.assertEqual(response.status_code, 413)
