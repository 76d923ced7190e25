/** Client form validation mirroring the API schema; server-side structured
 * errors are still surfaced when they arrive. */

export interface ClientForm {
  client_id: string;
  name: string;
  country: string;
  city: string;
  rank: string; // raw input, may be blank
  teu: string;
}

export function validateClientForm(form: ClientForm): Record<string, string> {
  const errors: Record<string, string> = {};
  if (!form.client_id.trim()) errors.client_id = 'client id required';
  if (!form.city.trim()) errors.city = 'city required';
  if (!form.country.trim()) errors.country = 'country required';
  if (form.rank.trim()) {
    const rank = Number(form.rank);
    if (!Number.isInteger(rank) || rank < 1 || rank > 5) {
      errors.rank = 'rank must be 1..5 or blank';
    }
  }
  const teu = Number(form.teu || '0');
  if (!Number.isInteger(teu) || teu < 0) errors.teu = 'teu must be a non-negative integer';
  return errors;
}

export function formToPayload(form: ClientForm) {
  return {
    client_id: form.client_id.trim(),
    name: form.name.trim(),
    country: form.country.trim(),
    city: form.city.trim(),
    rank: form.rank.trim() ? Number(form.rank) : null,
    teu: Number(form.teu || '0'),
  };
}
